#include "lmrank/ranked_output.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "lmrank/errors.hpp"

namespace lmrank {

namespace {

constexpr std::string_view kColumnsLine =
    "#columns\tsentence_id\trank\tengine_id\tunigrams\tbigrams\ttrigrams\tmatched_trigrams\tprob_sum";

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

std::uint64_t parse_u64(std::string_view text, const std::string& context) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(context + ": expected a non-negative integer, got \"" + std::string(text) +
                     "\"");
  return value;
}

}  // namespace

void write_ranked_output(std::ostream& out, const std::vector<RankedList>& lists,
                         const std::vector<std::string>& provenance) {
  for (const std::string& line : provenance) out << line << '\n';
  out << kColumnsLine << '\n';
  for (const RankedList& list : lists) {
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
      const CandidateScore& s = list.entries[i];
      out << list.sentence_id << '\t' << (i + 1) << '\t' << s.engine_id << '\t'
          << s.unigram_count << '\t' << s.bigram_count << '\t' << s.trigram_count << '\t'
          << s.matched_trigram_count << '\t' << format_probability(s.prob_sum) << '\n';
    }
  }
  if (!out) throw DataError("failed writing ranked output stream");
}

void write_ranked_output_file(const std::filesystem::path& path,
                              const std::vector<RankedList>& lists,
                              const std::vector<std::string>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open ranked output file for writing: " + path.string());
  write_ranked_output(out, lists, provenance);
  out.flush();
  if (!out) throw DataError("failed writing ranked output file: " + path.string());
}

std::vector<RankedList> read_ranked_output(std::istream& in, std::string_view source_name) {
  std::vector<RankedList> lists;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string context = std::string(source_name) + ":" + std::to_string(line_no);

    const auto fields = split_tabs(line);
    if (fields.size() != 8)
      throw ParseError(context + ": expected 8 tab-separated fields, got " +
                       std::to_string(fields.size()));
    if (fields[0].empty() || fields[2].empty())
      throw ParseError(context + ": empty sentence or engine id");

    CandidateScore score;
    score.engine_id = std::string(fields[2]);
    const std::uint64_t rank = parse_u64(fields[1], context);
    score.unigram_count = parse_u64(fields[3], context);
    score.bigram_count = parse_u64(fields[4], context);
    score.trigram_count = parse_u64(fields[5], context);
    score.matched_trigram_count = parse_u64(fields[6], context);
    try {
      std::size_t pos = 0;
      score.prob_sum = std::stod(std::string(fields[7]), &pos);
      if (pos != fields[7].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(context + ": unparsable prob_sum \"" + std::string(fields[7]) + "\"");
    }

    const std::string sentence_id(fields[0]);
    if (lists.empty() || lists.back().sentence_id != sentence_id) {
      for (const RankedList& previous : lists)
        if (previous.sentence_id == sentence_id)
          throw ParseError(context + ": records for sentence \"" + sentence_id +
                           "\" are not contiguous");
      if (rank != 1) throw ParseError(context + ": first record of a sentence must have rank 1");
      lists.push_back(RankedList{sentence_id, {}});
    } else {
      if (rank != lists.back().entries.size() + 1)
        throw ParseError(context + ": rank " + std::to_string(rank) + " out of sequence");
      if (score.prob_sum > lists.back().entries.back().prob_sum)
        throw DataError(context + ": prob_sum increases down the ranking for sentence \"" +
                        sentence_id + "\"");
    }
    for (const CandidateScore& existing : lists.back().entries)
      if (existing.engine_id == score.engine_id)
        throw DataError(context + ": duplicate engine \"" + score.engine_id +
                        "\" for sentence \"" + sentence_id + "\"");
    lists.back().entries.push_back(std::move(score));
  }
  return lists;
}

std::vector<RankedList> read_ranked_output_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open ranked output file: " + path.string());
  return read_ranked_output(in, path.string());
}

}  // namespace lmrank
