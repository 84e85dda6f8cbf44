#ifndef LMRANK_RANKER_HPP
#define LMRANK_RANKER_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmrank/corpus.hpp"
#include "lmrank/lexicon.hpp"
#include "lmrank/lm.hpp"

namespace lmrank {

// One engine's translation of one source sentence.
struct Candidate {
  std::string engine_id;
  std::string sentence_id;
  std::string text;
  TokenSequence tokens;  // shared tokenizer output for `text`
};

Candidate make_candidate(std::string engine_id, std::string sentence_id, std::string text);

// Per-candidate diagnostics: n-gram window counts, how many trigrams
// matched, and the cumulative probability used as the ranking key.
struct CandidateScore {
  std::string engine_id;
  std::uint64_t unigram_count = 0;
  std::uint64_t bigram_count = 0;
  std::uint64_t trigram_count = 0;
  std::uint64_t matched_trigram_count = 0;
  double prob_sum = 0.0;

  friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

// Candidates of one sentence, best first; the rank of entries[i] is i + 1.
struct RankedList {
  std::string sentence_id;
  std::vector<CandidateScore> entries;
};

// How many of a trigram's three word positions must carry a registered
// target word for the trigram to count as matched.
enum class Coverage { kAny, kAll, kMajority };

std::string_view to_string(Coverage mode);
Coverage parse_coverage(std::string_view name);

// The source sentence's trigrams, in order and with duplicates preserved,
// filtered to those present in the source language model.
std::vector<Ngram> retain_source_trigrams(const TokenSequence& source,
                                          const NgramModel& source_lm);

// A candidate trigram matches iff the target model contains it and the
// registered set covers it per `coverage`; prob_sum accumulates the target
// model's trigram probability over matching trigrams.
CandidateScore score_candidate(const Candidate& candidate,
                               std::span<const std::string> registered,
                               const NgramModel& target_lm, Coverage coverage = Coverage::kAny);

// Stable descending sort on prob_sum: equal sums keep their input order.
void sort_by_prob_sum(std::vector<CandidateScore>& scores);

// The full per-sentence pipeline: retain source trigrams once, project
// through the lexicon once, score every candidate, sort.
RankedList rank(const TokenSequence& source, const std::vector<Candidate>& candidates,
                const NgramModel& source_lm, const NgramModel& target_lm,
                const ParallelLexicon& lexicon, Coverage coverage = Coverage::kAny);

// Source sentence files: UTF-8 TSV `sentence_id<TAB>source-text`.
// Duplicate sentence ids raise DataError.
std::map<std::string, TokenSequence> load_sources(std::istream& in,
                                                  std::string_view source_name);
std::map<std::string, TokenSequence> load_sources_file(const std::filesystem::path& path);

// Candidate files: UTF-8 TSV `sentence_id<TAB>engine_id<TAB>translation-text`,
// grouped by sentence in file order. Duplicate (sentence, engine) pairs
// raise DataError.
std::map<std::string, std::vector<Candidate>> load_candidates(std::istream& in,
                                                              std::string_view source_name);
std::map<std::string, std::vector<Candidate>> load_candidates_file(
    const std::filesystem::path& path);

}  // namespace lmrank

#endif  // LMRANK_RANKER_HPP
