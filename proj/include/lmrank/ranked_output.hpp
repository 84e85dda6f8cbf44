#ifndef LMRANK_RANKED_OUTPUT_HPP
#define LMRANK_RANKED_OUTPUT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lmrank/ranker.hpp"

namespace lmrank {

// Ranked-output files: one record per candidate,
//   sentence_id<TAB>rank<TAB>engine_id<TAB>unigrams<TAB>bigrams<TAB>trigrams
//   <TAB>matched_trigrams<TAB>prob_sum
// grouped by sentence with ranks 1..k and non-increasing prob_sum, sentences
// in ascending sentence_id order. `#` lines are comments; the writer puts
// provenance there.
void write_ranked_output(std::ostream& out, const std::vector<RankedList>& lists,
                         const std::vector<std::string>& provenance = {});
void write_ranked_output_file(const std::filesystem::path& path,
                              const std::vector<RankedList>& lists,
                              const std::vector<std::string>& provenance = {});

std::vector<RankedList> read_ranked_output(std::istream& in, std::string_view source_name);
std::vector<RankedList> read_ranked_output_file(const std::filesystem::path& path);

}  // namespace lmrank

#endif  // LMRANK_RANKED_OUTPUT_HPP
