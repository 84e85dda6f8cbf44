#include "lmrank/lm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "lmrank/errors.hpp"

namespace lmrank {

namespace {

constexpr std::string_view kModelHeaderTag = "#lmrank-model";
constexpr std::string_view kOrderTag = "#order";

std::string join2(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back(' ');
  key.append(b);
  return key;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::uint64_t parse_count(std::string_view text, const std::string& context) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(context + ": expected a non-negative integer, got \"" + std::string(text) +
                     "\"");
  return value;
}

double parse_double(std::string_view text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(std::string(text), &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected a number, got \"" + std::string(text) + "\"");
  }
}

// Parses `key=value` and returns value; the key must match exactly.
std::string_view expect_kv(std::string_view field, std::string_view key,
                           const std::string& context) {
  if (field.size() < key.size() + 1 || field.substr(0, key.size()) != key ||
      field[key.size()] != '=')
    throw ParseError(context + ": expected " + std::string(key) + "=..., got \"" +
                     std::string(field) + "\"");
  return field.substr(key.size() + 1);
}

int word_count(std::string_view key) {
  int words = 1;
  for (char c : key)
    if (c == ' ') ++words;
  return words;
}

}  // namespace

std::string_view to_string(UnigramDenominator mode) {
  return mode == UnigramDenominator::kTokens ? "tokens" : "vocab";
}

UnigramDenominator parse_unigram_denominator(std::string_view name) {
  if (name == "tokens") return UnigramDenominator::kTokens;
  if (name == "vocab") return UnigramDenominator::kVocab;
  throw ConfigError("unknown unigram denominator mode \"" + std::string(name) +
                    "\" (expected tokens or vocab)");
}

std::uint64_t NgramModel::count(const Ngram& g) const {
  const auto& table = counts_[static_cast<std::size_t>(g.order() - 1)];
  const auto it = table.find(g.key());
  return it == table.end() ? 0 : it->second;
}

void NgramModel::require_non_empty() const {
  if (empty()) throw EmptyModelError("probability query against an empty model");
}

double NgramModel::prob_unigram(std::string_view w) const {
  require_non_empty();
  const auto it = counts_[0].find(std::string(w));
  if (it == counts_[0].end()) return 0.0;
  const std::uint64_t denom =
      denominator_ == UnigramDenominator::kTokens ? total_tokens() : vocab_size();
  return static_cast<double>(it->second) / static_cast<double>(denom);
}

double NgramModel::prob_bigram(std::string_view w1, std::string_view w2) const {
  require_non_empty();
  const auto denom_it = bigram_prefix_totals_.find(std::string(w1));
  if (denom_it == bigram_prefix_totals_.end()) return 0.0;
  const auto it = counts_[1].find(join2(w1, w2));
  if (it == counts_[1].end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(denom_it->second);
}

double NgramModel::prob_trigram(std::string_view w1, std::string_view w2,
                                std::string_view w3) const {
  require_non_empty();
  const std::string prefix = join2(w1, w2);
  const auto denom_it = trigram_prefix_totals_.find(prefix);
  if (denom_it == trigram_prefix_totals_.end()) return 0.0;
  const auto it = counts_[2].find(join2(prefix, w3));
  if (it == counts_[2].end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(denom_it->second);
}

CorpusStats NgramModel::stats(std::uint64_t sentence_count) const {
  CorpusStats s;
  s.sentence_count = sentence_count;
  s.distinct_unigrams = counts_[0].size();
  s.distinct_bigrams = counts_[1].size();
  s.distinct_trigrams = counts_[2].size();
  s.total_tokens = totals_[0];
  s.total_bigrams = totals_[1];
  s.total_trigrams = totals_[2];
  return s;
}

std::vector<std::pair<std::string, std::uint64_t>> NgramModel::sorted_records(int order) const {
  if (order < 1 || order > 3)
    throw std::invalid_argument("ngram order must be 1, 2 or 3, got " + std::to_string(order));
  const auto& table = counts_[static_cast<std::size_t>(order - 1)];
  std::vector<std::pair<std::string, std::uint64_t>> records(table.begin(), table.end());
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return records;
}

NgramModelBuilder::NgramModelBuilder(std::string language_tag, UnigramDenominator mode) {
  model_.language_tag_ = std::move(language_tag);
  model_.denominator_ = mode;
}

void NgramModelBuilder::add(const TokenSequence& sentence) {
  const auto& toks = sentence.tokens;
  const std::size_t n = toks.size();
  for (std::size_t i = 0; i < n; ++i) {
    ++model_.counts_[0][toks[i].surface()];
    if (i + 1 < n) ++model_.counts_[1][join2(toks[i].surface(), toks[i + 1].surface())];
    if (i + 2 < n)
      ++model_.counts_[2][join2(join2(toks[i].surface(), toks[i + 1].surface()),
                                toks[i + 2].surface())];
  }
}

void NgramModelBuilder::add_counts(const NgramModel& other) {
  if (other.language_tag_ != model_.language_tag_)
    throw DataError("cannot merge models with different language tags: \"" +
                    model_.language_tag_ + "\" vs \"" + other.language_tag_ + "\"");
  for (std::size_t order = 0; order < 3; ++order)
    for (const auto& [key, cnt] : other.counts_[order]) model_.counts_[order][key] += cnt;
}

void NgramModelBuilder::add_record(int order, const std::string& key, std::uint64_t count) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("ngram order must be 1, 2 or 3, got " + std::to_string(order));
  model_.counts_[static_cast<std::size_t>(order - 1)][key] += count;
}

NgramModel NgramModelBuilder::build() && {
  for (std::size_t order = 0; order < 3; ++order) {
    std::uint64_t total = 0;
    for (const auto& [key, cnt] : model_.counts_[order]) total += cnt;
    model_.totals_[order] = total;
  }
  model_.bigram_prefix_totals_.clear();
  for (const auto& [key, cnt] : model_.counts_[1])
    model_.bigram_prefix_totals_[std::string(key.substr(0, key.find(' ')))] += cnt;
  model_.trigram_prefix_totals_.clear();
  for (const auto& [key, cnt] : model_.counts_[2])
    model_.trigram_prefix_totals_[std::string(key.substr(0, key.rfind(' ')))] += cnt;
  return std::move(model_);
}

NgramModel train(const std::vector<TokenSequence>& sentences, std::string language_tag,
                 UnigramDenominator mode) {
  NgramModelBuilder builder(std::move(language_tag), mode);
  for (const TokenSequence& sentence : sentences) builder.add(sentence);
  return std::move(builder).build();
}

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

void save_model(const NgramModel& model, std::ostream& out,
                const std::vector<std::string>& provenance) {
  for (const std::string& line : provenance) {
    if (line.empty() || line[0] != '#' || line.find('\n') != std::string::npos ||
        line.rfind(kModelHeaderTag, 0) == 0 || line.rfind(kOrderTag, 0) == 0)
      throw DataError("provenance lines must be single-line # comments: \"" + line + "\"");
    out << line << '\n';
  }
  if (model.language_tag().find('\t') != std::string::npos ||
      model.language_tag().find('\n') != std::string::npos)
    throw DataError("language tag must not contain tabs or newlines");

  out << kModelHeaderTag << "\tlanguage=" << model.language_tag()
      << "\tdenominator=" << to_string(model.unigram_denominator())
      << "\ttotal_tokens=" << model.total_tokens() << "\tvocab_size=" << model.vocab_size()
      << '\n';
  for (int order = 1; order <= 3; ++order) {
    const auto records = model.sorted_records(order);
    out << kOrderTag << "\tn=" << order << "\tdistinct=" << records.size() << '\n';
    for (const auto& [key, cnt] : records) {
      double prob = 0.0;
      if (order == 1) {
        prob = model.prob_unigram(key);
      } else {
        const std::size_t last = key.rfind(' ');
        const std::string_view prefix = std::string_view(key).substr(0, last);
        const std::string_view word = std::string_view(key).substr(last + 1);
        if (order == 2) {
          prob = model.prob_bigram(prefix, word);
        } else {
          const std::size_t first = prefix.find(' ');
          prob = model.prob_trigram(prefix.substr(0, first), prefix.substr(first + 1), word);
        }
      }
      out << key << '\t' << cnt << '\t' << format_probability(prob) << '\n';
    }
  }
  if (!out) throw DataError("failed writing model stream");
}

void save_model_file(const NgramModel& model, const std::filesystem::path& path,
                     const std::vector<std::string>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open model file for writing: " + path.string());
  save_model(model, out, provenance);
  out.flush();
  if (!out) throw DataError("failed writing model file: " + path.string());
}

LoadedModel load_model(std::istream& in, std::string_view source_name) {
  std::vector<std::string> provenance;
  std::string line;
  std::size_t line_no = 0;
  const auto context = [&] { return std::string(source_name) + ":" + std::to_string(line_no); };

  // Provenance comments, then the model header line.
  std::string header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(kModelHeaderTag, 0) == 0) {
      header = line;
      break;
    }
    if (line.empty() || line[0] != '#' || line.rfind(kOrderTag, 0) == 0)
      throw ParseError(context() + ": expected # comments or the model header, got \"" + line +
                       "\"");
    provenance.push_back(line);
  }
  if (header.empty())
    throw ParseError(std::string(source_name) + ": missing " + std::string(kModelHeaderTag) +
                     " header line");

  const auto header_fields = split_tabs(header);
  if (header_fields.size() != 5)
    throw ParseError(context() + ": malformed model header (expected 5 tab-separated fields)");
  const std::string language(expect_kv(header_fields[1], "language", context()));
  const UnigramDenominator mode =
      parse_unigram_denominator(expect_kv(header_fields[2], "denominator", context()));
  const std::uint64_t header_tokens =
      parse_count(expect_kv(header_fields[3], "total_tokens", context()), context());
  const std::uint64_t header_vocab =
      parse_count(expect_kv(header_fields[4], "vocab_size", context()), context());

  NgramModelBuilder builder(language, mode);
  std::array<std::uint64_t, 3> loaded_distinct = {0, 0, 0};
  std::array<std::unordered_set<std::string>, 3> seen_keys;
  std::array<std::uint64_t, 3> declared_distinct = {0, 0, 0};
  std::array<bool, 3> section_seen = {false, false, false};
  int current_order = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind(kOrderTag, 0) == 0) {
      const auto fields = split_tabs(line);
      if (fields.size() != 3)
        throw ParseError(context() + ": malformed section marker \"" + line + "\"");
      const int order =
          static_cast<int>(parse_count(expect_kv(fields[1], "n", context()), context()));
      if (order < 1 || order > 3)
        throw ParseError(context() + ": section order must be 1, 2 or 3");
      if (section_seen[static_cast<std::size_t>(order - 1)])
        throw ParseError(context() + ": duplicate section for order " + std::to_string(order));
      section_seen[static_cast<std::size_t>(order - 1)] = true;
      declared_distinct[static_cast<std::size_t>(order - 1)] =
          parse_count(expect_kv(fields[2], "distinct", context()), context());
      current_order = order;
      continue;
    }
    if (line[0] == '#')
      throw ParseError(context() + ": unexpected comment inside model body");
    if (current_order == 0)
      throw ParseError(context() + ": record before any #order section");
    const auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw ParseError(context() + ": expected key<TAB>count<TAB>probability");
    const std::string key(fields[0]);
    if (key.empty() || key.front() == ' ' || key.back() == ' ' ||
        key.find("  ") != std::string::npos)
      throw ParseError(context() + ": malformed n-gram key \"" + key + "\"");
    if (word_count(key) != current_order)
      throw ParseError(context() + ": key \"" + key + "\" does not have order " +
                       std::to_string(current_order));
    const std::uint64_t cnt = parse_count(fields[1], context());
    if (cnt == 0) throw ParseError(context() + ": zero counts are not stored");
    parse_double(fields[2], context());  // informational column, must still parse
    if (!seen_keys[static_cast<std::size_t>(current_order - 1)].insert(key).second)
      throw ParseError(context() + ": duplicate key \"" + key + "\"");
    builder.add_record(current_order, key, cnt);
    ++loaded_distinct[static_cast<std::size_t>(current_order - 1)];
  }

  for (int order = 1; order <= 3; ++order)
    if (!section_seen[static_cast<std::size_t>(order - 1)])
      throw ParseError(std::string(source_name) + ": missing #order section for order " +
                       std::to_string(order));

  NgramModel model = std::move(builder).build();

  const std::string name(source_name);
  if (model.total_tokens() != header_tokens)
    throw DataError(name + ": header total_tokens=" + std::to_string(header_tokens) +
                    " but unigram counts sum to " + std::to_string(model.total_tokens()));
  if (model.vocab_size() != header_vocab)
    throw DataError(name + ": header vocab_size=" + std::to_string(header_vocab) + " but " +
                    std::to_string(model.vocab_size()) + " distinct unigrams are stored");
  for (int order = 1; order <= 3; ++order)
    if (loaded_distinct[static_cast<std::size_t>(order - 1)] !=
        declared_distinct[static_cast<std::size_t>(order - 1)])
      throw DataError(name + ": order " + std::to_string(order) + " section declares distinct=" +
                      std::to_string(declared_distinct[static_cast<std::size_t>(order - 1)]) +
                      " but holds " +
                      std::to_string(loaded_distinct[static_cast<std::size_t>(order - 1)]) +
                      " records");

  // Count-table invariants: every n-gram is bounded by its prefix and every
  // participating word is a stored unigram.
  for (const auto& [key, cnt] : model.sorted_records(2)) {
    const std::size_t sp = key.find(' ');
    const std::string first = key.substr(0, sp);
    const std::string second = key.substr(sp + 1);
    if (cnt > model.count(Ngram::unchecked({first})))
      throw DataError(name + ": bigram \"" + key + "\" exceeds or lacks its unigram prefix");
    if (model.count(Ngram::unchecked({second})) == 0)
      throw DataError(name + ": bigram \"" + key + "\" uses a word missing from unigrams");
  }
  for (const auto& [key, cnt] : model.sorted_records(3)) {
    const std::size_t last = key.rfind(' ');
    const std::string prefix = key.substr(0, last);
    const std::string third = key.substr(last + 1);
    const std::size_t sp = prefix.find(' ');
    if (cnt > model.count(Ngram::unchecked({prefix.substr(0, sp), prefix.substr(sp + 1)})))
      throw DataError(name + ": trigram \"" + key + "\" exceeds or lacks its bigram prefix");
    if (model.count(Ngram::unchecked({third})) == 0)
      throw DataError(name + ": trigram \"" + key + "\" uses a word missing from unigrams");
  }

  return LoadedModel{std::move(model), std::move(provenance)};
}

LoadedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file: " + path.string());
  return load_model(in, path.string());
}

}  // namespace lmrank
