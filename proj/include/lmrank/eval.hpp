#ifndef LMRANK_EVAL_HPP
#define LMRANK_EVAL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lmrank/ranker.hpp"

namespace lmrank {

// One evaluator judgment: ten 1-5 scores for one engine's output of one
// sentence (1 is best).
struct HumanScoreSheet {
  std::string sentence_id;
  std::string engine_id;
  std::array<int, 10> scores = {};
};

// Throws DataError unless every score is in 1..5.
void validate(const HumanScoreSheet& sheet);

// Arithmetic mean of the ten scores.
double average_score(const HumanScoreSheet& sheet);

// Direction-free view of one sentence's ranking used by the comparison
// layer: engines best first, with the module's own sort keys kept only to
// recognize ties.
struct RankOrder {
  std::string sentence_id;
  std::vector<std::string> engines;  // best first
  std::vector<double> keys;          // parallel to engines

  friend bool operator==(const RankOrder&, const RankOrder&) = default;
};

RankOrder to_rank_order(const RankedList& ranked);

// Sorts one sentence's sheets ascending by average score (lower is better);
// ties keep input order. Throws DataError on duplicate engines or sheets
// from mixed sentences.
RankOrder human_rank(const std::vector<HumanScoreSheet>& sheets);

// Engine subset compared together (all engines, web engines, ...).
struct CategorySpec {
  std::string name;
  std::vector<std::string> engine_ids;
};

// For each category engine, the number of sentences where it ranks first
// once the ranking is restricted to the category. Throws DataError when a
// sentence has none of the category's engines.
std::map<std::string, std::uint64_t> top_rank_tally(const std::vector<RankOrder>& rankings,
                                                    const CategorySpec& category);

struct AgreementReport {
  std::string category;
  std::uint64_t sentence_count = 0;
  std::map<std::string, std::uint64_t> lm_tally;
  std::map<std::string, std::uint64_t> human_tally;
  double top1_agreement = 0.0;  // fraction of sentences with the same top engine
  double mean_spearman = 0.0;   // mean per-sentence rank correlation
};

// Compares LM and human rankings per category: both top-rank tallies, the
// top-1 agreement fraction, and mean Spearman rho over sentences. The two
// streams must cover the same sentences with the same engines.
std::vector<AgreementReport> agreement(const std::vector<RankOrder>& lm_rankings,
                                       const std::vector<RankOrder>& human_rankings,
                                       const std::vector<CategorySpec>& categories);

// Spearman rank correlation of two equal-length rank vectors (average ranks
// for ties). When both vectors are constant it is 1 if they are identical
// as rankings and 0 otherwise; 0 when exactly one side is constant.
double spearman_rho(const std::vector<double>& ranks_a, const std::vector<double>& ranks_b);

// Positions 1..k with tie groups (equal keys) replaced by their mean position.
std::vector<double> average_ranks(const std::vector<double>& keys);

// Human score files: UTF-8 TSV `sentence_id<TAB>engine_id<TAB>s1..s10`
// (12 columns), `#` comments and blank lines ignored.
std::vector<HumanScoreSheet> load_human_scores(std::istream& in, std::string_view source_name);
std::vector<HumanScoreSheet> load_human_scores_file(const std::filesystem::path& path);

// Groups sheets by sentence and ranks each sentence's engines.
std::vector<RankOrder> human_rank_all(const std::vector<HumanScoreSheet>& sheets);

void write_agreement_reports(std::ostream& out, const std::vector<AgreementReport>& reports,
                             const std::vector<CategorySpec>& categories,
                             const std::vector<std::string>& provenance = {});

}  // namespace lmrank

#endif  // LMRANK_EVAL_HPP
