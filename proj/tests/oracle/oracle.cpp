#include "oracle/oracle.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

constexpr std::string_view kDanda = "\xE0\xA5\xA4";  // U+0964

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_ascii_punct(char c) { return c == '.' || c == '!' || c == '?' || c == ','; }

bool ends_with_danda(std::string_view s) {
  return s.size() >= kDanda.size() && s.substr(s.size() - kDanda.size()) == kDanda;
}

// Counts code points from UTF-8 lead bytes; enough to know whether more
// than one code point remains.
std::size_t code_point_count(std::string_view s) {
  std::size_t count = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  return count;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_ascii_space(raw[i])) ++i;
    std::size_t start = i;
    while (i < raw.size() && !is_ascii_space(raw[i])) ++i;
    if (i == start) break;
    std::string_view fragment = raw.substr(start, i - start);

    std::vector<std::string> tail;
    while (code_point_count(fragment) > 1) {
      if (ends_with_danda(fragment)) {
        tail.insert(tail.begin(), std::string(kDanda));
        fragment.remove_suffix(kDanda.size());
      } else if (is_ascii_punct(fragment.back())) {
        tail.insert(tail.begin(), std::string(1, fragment.back()));
        fragment.remove_suffix(1);
      } else {
        break;
      }
    }
    tokens.emplace_back(fragment);
    for (std::string& t : tail) tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<Gram> ngrams(const std::vector<std::string>& tokens, int order) {
  std::vector<Gram> out;
  if (order < 1) throw std::invalid_argument("oracle: bad order");
  const std::size_t width = static_cast<std::size_t>(order);
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    Gram gram;
    for (std::size_t k = 0; k < width; ++k) gram.push_back(tokens[i + k]);
    out.push_back(std::move(gram));
  }
  return out;
}

CountTable count_corpus(const std::vector<std::string>& raw_sentences) {
  CountTable table;
  for (const std::string& raw : raw_sentences) {
    const std::vector<std::string> tokens = tokenize(raw);
    table.total_tokens += tokens.size();
    for (int order = 1; order <= 3; ++order)
      for (Gram& gram : ngrams(tokens, order)) ++table.by_order[order - 1][std::move(gram)];
  }
  return table;
}

std::uint64_t count_of(const CountTable& table, const Gram& gram) {
  const auto& m = table.by_order[gram.size() - 1];
  const auto it = m.find(gram);
  return it == m.end() ? 0 : it->second;
}

std::uint64_t continuation_total(const CountTable& table, const Gram& prefix) {
  const auto& m = table.by_order[prefix.size()];  // grams one order above the prefix
  std::uint64_t total = 0;
  for (const auto& [gram, cnt] : m) {
    bool matches = true;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (gram[i] != prefix[i]) matches = false;
    if (matches) total += cnt;
  }
  return total;
}

Rational prob_unigram(const CountTable& table, const std::string& w, bool vocab_denominator) {
  const std::uint64_t denom =
      vocab_denominator ? table.by_order[0].size() : table.total_tokens;
  if (denom == 0) throw std::domain_error("oracle: empty table");
  return Rational(count_of(table, {w}), denom);
}

Rational prob_bigram(const CountTable& table, const std::string& w1, const std::string& w2) {
  const std::uint64_t denom = continuation_total(table, {w1});
  if (denom == 0) return Rational(0);
  return Rational(count_of(table, {w1, w2}), denom);
}

Rational prob_trigram(const CountTable& table, const std::string& w1, const std::string& w2,
                      const std::string& w3) {
  const std::uint64_t denom = continuation_total(table, {w1, w2});
  if (denom == 0) return Rational(0);
  return Rational(count_of(table, {w1, w2, w3}), denom);
}

std::vector<std::string> project(const std::vector<std::pair<std::string, std::string>>& pairs,
                                 const std::vector<Gram>& retained) {
  std::vector<std::string> registered;
  std::set<std::string> seen;
  for (const Gram& gram : retained)
    for (const std::string& word : gram)
      for (const auto& [source, target] : pairs)
        if (source == word && seen.insert(target).second) registered.push_back(target);
  return registered;
}

RankResult rank(std::string_view sentence_id, std::string_view raw_source,
                const std::vector<std::pair<std::string, std::string>>& candidates,
                const std::vector<std::string>& source_corpus,
                const std::vector<std::string>& target_corpus,
                const std::vector<std::pair<std::string, std::string>>& lexicon_pairs,
                std::string_view coverage) {
  int needed = 0;
  if (coverage == "any")
    needed = 1;
  else if (coverage == "majority")
    needed = 2;
  else if (coverage == "all")
    needed = 3;
  else
    throw std::invalid_argument("oracle: bad coverage mode");

  const CountTable source_table = count_corpus(source_corpus);
  const CountTable target_table = count_corpus(target_corpus);

  std::vector<Gram> retained;
  for (Gram& gram : ngrams(tokenize(raw_source), 3))
    if (count_of(source_table, gram) > 0) retained.push_back(std::move(gram));

  std::set<std::string> registered;
  for (const std::string& word : project(lexicon_pairs, retained)) registered.insert(word);

  RankResult result;
  result.sentence_id = std::string(sentence_id);
  for (const auto& [engine_id, raw_text] : candidates) {
    ScoredCandidate scored;
    scored.engine_id = engine_id;
    const std::vector<std::string> tokens = tokenize(raw_text);
    scored.unigram_count = ngrams(tokens, 1).size();
    scored.bigram_count = ngrams(tokens, 2).size();
    scored.trigram_count = ngrams(tokens, 3).size();
    scored.prob_sum = Rational(0);
    for (const Gram& trigram : ngrams(tokens, 3)) {
      if (count_of(target_table, trigram) == 0) continue;
      int covered = 0;
      for (const std::string& word : trigram)
        if (registered.count(word) > 0) ++covered;
      if (covered < needed) continue;
      ++scored.matched_trigram_count;
      scored.prob_sum += prob_trigram(target_table, trigram[0], trigram[1], trigram[2]);
    }
    result.entries.push_back(std::move(scored));
  }

  // Selection sort keeping input order among exact ties.
  std::vector<ScoredCandidate> sorted;
  std::vector<bool> used(result.entries.size(), false);
  for (std::size_t round = 0; round < result.entries.size(); ++round) {
    std::size_t best = result.entries.size();
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
      if (used[i]) continue;
      if (best == result.entries.size() ||
          result.entries[i].prob_sum > result.entries[best].prob_sum)
        best = i;
    }
    used[best] = true;
    sorted.push_back(result.entries[best]);
  }
  result.entries = std::move(sorted);
  return result;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::vector<double> ranks_from_keys(const std::vector<double>& keys) {
  std::vector<double> ranks(keys.size(), 0.0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    double position_sum = 0.0;
    double tie_count = 0.0;
    for (std::size_t j = 0; j < keys.size(); ++j) {
      if (keys[j] == keys[i]) {
        position_sum += static_cast<double>(j + 1);
        tie_count += 1.0;
      }
    }
    ranks[i] = position_sum / tie_count;
  }
  return ranks;
}

double spearman(const std::vector<double>& ranks_x, const std::vector<double>& ranks_y) {
  const std::size_t n = ranks_x.size();
  if (n == 0 || ranks_y.size() != n) throw std::invalid_argument("oracle: bad rank vectors");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += ranks_x[i];
    mean_y += ranks_y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double num = 0.0, den_x = 0.0, den_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ranks_x[i] - mean_x) * (ranks_y[i] - mean_y);
    den_x += (ranks_x[i] - mean_x) * (ranks_x[i] - mean_x);
    den_y += (ranks_y[i] - mean_y) * (ranks_y[i] - mean_y);
  }
  if (den_x == 0.0 && den_y == 0.0) return ranks_x == ranks_y ? 1.0 : 0.0;
  if (den_x == 0.0 || den_y == 0.0) return 0.0;
  return num / std::sqrt(den_x * den_y);
}

}  // namespace oracle
