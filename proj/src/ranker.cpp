#include "lmrank/ranker.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "lmrank/errors.hpp"

namespace lmrank {

namespace {

struct TsvLine {
  std::size_t line_no = 0;
  std::vector<std::string> fields;
};

// Shared reader for the two candidate-side TSV inputs: skips blank and `#`
// comment lines, strips a BOM and trailing CR, enforces the column count.
std::vector<TsvLine> read_tsv(std::istream& in, std::string_view source_name,
                              std::size_t expected_fields) {
  std::vector<TsvLine> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    TsvLine row;
    row.line_no = line_no;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        row.fields.push_back(line.substr(start));
        break;
      }
      row.fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (row.fields.size() != expected_fields)
      throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_fields) + " tab-separated fields, got " +
                       std::to_string(row.fields.size()));
    for (std::size_t i = 0; i + 1 < row.fields.size(); ++i)
      if (row.fields[i].empty())
        throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) +
                         ": empty field " + std::to_string(i + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string_view to_string(Coverage mode) {
  switch (mode) {
    case Coverage::kAny:
      return "any";
    case Coverage::kAll:
      return "all";
    case Coverage::kMajority:
      return "majority";
  }
  return "any";
}

Coverage parse_coverage(std::string_view name) {
  if (name == "any") return Coverage::kAny;
  if (name == "all") return Coverage::kAll;
  if (name == "majority") return Coverage::kMajority;
  throw ConfigError("unknown coverage mode \"" + std::string(name) +
                    "\" (expected any, all or majority)");
}

Candidate make_candidate(std::string engine_id, std::string sentence_id, std::string text) {
  Candidate c;
  c.engine_id = std::move(engine_id);
  c.sentence_id = std::move(sentence_id);
  c.text = std::move(text);
  c.tokens = tokenize(c.text, c.sentence_id);
  return c;
}

std::vector<Ngram> retain_source_trigrams(const TokenSequence& source,
                                          const NgramModel& source_lm) {
  std::vector<Ngram> retained;
  for (Ngram& g : extract_ngrams(source, 3))
    if (source_lm.contains(g)) retained.push_back(std::move(g));
  return retained;
}

CandidateScore score_candidate(const Candidate& candidate,
                               std::span<const std::string> registered,
                               const NgramModel& target_lm, Coverage coverage) {
  CandidateScore score;
  score.engine_id = candidate.engine_id;
  const std::uint64_t len = candidate.tokens.size();
  score.unigram_count = len;
  score.bigram_count = len >= 1 ? len - 1 : 0;
  score.trigram_count = len >= 2 ? len - 2 : 0;

  const std::unordered_set<std::string_view> registered_set(registered.begin(),
                                                            registered.end());
  const int needed = coverage == Coverage::kAny ? 1 : coverage == Coverage::kMajority ? 2 : 3;
  for (const Ngram& trigram : extract_ngrams(candidate.tokens, 3)) {
    if (!target_lm.contains(trigram)) continue;
    int covered = 0;
    for (const std::string& word : trigram.words())
      if (registered_set.contains(word)) ++covered;
    if (covered < needed) continue;
    ++score.matched_trigram_count;
    const auto& w = trigram.words();
    score.prob_sum += target_lm.prob_trigram(w[0], w[1], w[2]);
  }
  return score;
}

void sort_by_prob_sum(std::vector<CandidateScore>& scores) {
  std::stable_sort(scores.begin(), scores.end(), [](const CandidateScore& a,
                                                    const CandidateScore& b) {
    return a.prob_sum > b.prob_sum;
  });
}

RankedList rank(const TokenSequence& source, const std::vector<Candidate>& candidates,
                const NgramModel& source_lm, const NgramModel& target_lm,
                const ParallelLexicon& lexicon, Coverage coverage) {
  if (candidates.empty())
    throw DataError("rank: no candidates for sentence \"" + source.sentence_id + "\"");
  std::unordered_set<std::string_view> engines;
  for (const Candidate& c : candidates) {
    if (!engines.insert(c.engine_id).second)
      throw DataError("rank: duplicate engine id \"" + c.engine_id + "\" for sentence \"" +
                      source.sentence_id + "\"");
    if (c.sentence_id != source.sentence_id)
      throw DataError("rank: candidate from engine \"" + c.engine_id + "\" carries sentence id \"" +
                      c.sentence_id + "\", expected \"" + source.sentence_id + "\"");
  }

  const std::vector<Ngram> retained = retain_source_trigrams(source, source_lm);
  const std::vector<std::string> registered = project(lexicon, retained);

  RankedList out;
  out.sentence_id = source.sentence_id;
  out.entries.reserve(candidates.size());
  for (const Candidate& c : candidates)
    out.entries.push_back(score_candidate(c, registered, target_lm, coverage));
  sort_by_prob_sum(out.entries);
  return out;
}

std::map<std::string, TokenSequence> load_sources(std::istream& in,
                                                  std::string_view source_name) {
  std::map<std::string, TokenSequence> sources;
  for (TsvLine& row : read_tsv(in, source_name, 2)) {
    const std::string& id = row.fields[0];
    if (sources.contains(id))
      throw DataError(std::string(source_name) + ":" + std::to_string(row.line_no) +
                      ": duplicate sentence id \"" + id + "\"");
    try {
      sources.emplace(id, tokenize(row.fields[1], id));
    } catch (const ParseError& e) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(row.line_no) + ": " +
                       e.what());
    }
  }
  return sources;
}

std::map<std::string, TokenSequence> load_sources_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sources file: " + path.string());
  return load_sources(in, path.string());
}

std::map<std::string, std::vector<Candidate>> load_candidates(std::istream& in,
                                                              std::string_view source_name) {
  std::map<std::string, std::vector<Candidate>> candidates;
  for (TsvLine& row : read_tsv(in, source_name, 3)) {
    const std::string& sentence_id = row.fields[0];
    const std::string& engine_id = row.fields[1];
    auto& list = candidates[sentence_id];
    for (const Candidate& existing : list)
      if (existing.engine_id == engine_id)
        throw DataError(std::string(source_name) + ":" + std::to_string(row.line_no) +
                        ": duplicate candidate for sentence \"" + sentence_id +
                        "\" and engine \"" + engine_id + "\"");
    try {
      list.push_back(make_candidate(engine_id, sentence_id, std::move(row.fields[2])));
    } catch (const ParseError& e) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(row.line_no) + ": " +
                       e.what());
    }
  }
  return candidates;
}

std::map<std::string, std::vector<Candidate>> load_candidates_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open candidates file: " + path.string());
  return load_candidates(in, path.string());
}

}  // namespace lmrank
