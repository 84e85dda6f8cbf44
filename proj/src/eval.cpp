#include "lmrank/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lmrank/errors.hpp"

namespace lmrank {

namespace {

std::vector<std::string> split_tabs_copy(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Restricts a ranking to the category's engines, preserving order. Returns
// indices into order.engines.
std::vector<std::size_t> restrict_to(const RankOrder& order,
                                     const std::unordered_set<std::string_view>& members) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.engines.size(); ++i)
    if (members.contains(order.engines[i])) kept.push_back(i);
  return kept;
}

}  // namespace

void validate(const HumanScoreSheet& sheet) {
  for (int s : sheet.scores)
    if (s < 1 || s > 5)
      throw DataError("human score out of range for sentence \"" + sheet.sentence_id +
                      "\", engine \"" + sheet.engine_id + "\": " + std::to_string(s));
}

double average_score(const HumanScoreSheet& sheet) {
  validate(sheet);
  const int sum = std::accumulate(sheet.scores.begin(), sheet.scores.end(), 0);
  return static_cast<double>(sum) / static_cast<double>(sheet.scores.size());
}

RankOrder to_rank_order(const RankedList& ranked) {
  RankOrder order;
  order.sentence_id = ranked.sentence_id;
  order.engines.reserve(ranked.entries.size());
  order.keys.reserve(ranked.entries.size());
  for (const CandidateScore& entry : ranked.entries) {
    order.engines.push_back(entry.engine_id);
    order.keys.push_back(entry.prob_sum);
  }
  return order;
}

RankOrder human_rank(const std::vector<HumanScoreSheet>& sheets) {
  if (sheets.empty()) throw DataError("human_rank: no score sheets");
  const std::string& sentence_id = sheets.front().sentence_id;
  std::unordered_set<std::string_view> engines;
  for (const HumanScoreSheet& sheet : sheets) {
    if (sheet.sentence_id != sentence_id)
      throw DataError("human_rank: mixed sentence ids \"" + sentence_id + "\" and \"" +
                      sheet.sentence_id + "\"");
    if (!engines.insert(sheet.engine_id).second)
      throw DataError("human_rank: duplicate engine \"" + sheet.engine_id + "\" for sentence \"" +
                      sentence_id + "\"");
  }

  std::vector<std::size_t> index(sheets.size());
  std::iota(index.begin(), index.end(), 0);
  std::vector<double> averages(sheets.size());
  for (std::size_t i = 0; i < sheets.size(); ++i) averages[i] = average_score(sheets[i]);
  // 1 is "best" on the five-point scale, so ascending averages; stable keeps
  // input order on ties.
  std::stable_sort(index.begin(), index.end(),
                   [&](std::size_t a, std::size_t b) { return averages[a] < averages[b]; });

  RankOrder order;
  order.sentence_id = sentence_id;
  for (std::size_t i : index) {
    order.engines.push_back(sheets[i].engine_id);
    order.keys.push_back(averages[i]);
  }
  return order;
}

std::map<std::string, std::uint64_t> top_rank_tally(const std::vector<RankOrder>& rankings,
                                                    const CategorySpec& category) {
  if (category.engine_ids.empty())
    throw DataError("category \"" + category.name + "\" has no engines");
  std::unordered_set<std::string_view> members(category.engine_ids.begin(),
                                               category.engine_ids.end());
  std::map<std::string, std::uint64_t> tally;
  for (const std::string& engine : category.engine_ids) tally[engine] = 0;
  for (const RankOrder& order : rankings) {
    const std::vector<std::size_t> kept = restrict_to(order, members);
    if (kept.empty())
      throw DataError("sentence \"" + order.sentence_id + "\" has no engine from category \"" +
                      category.name + "\"");
    ++tally[order.engines[kept.front()]];
  }
  return tally;
}

std::vector<double> average_ranks(const std::vector<double>& keys) {
  std::vector<double> ranks(keys.size());
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i;
    while (j + 1 < keys.size() && keys[j + 1] == keys[i]) ++j;
    // positions i+1 .. j+1 share the mean rank
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[k] = mean;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& ranks_a, const std::vector<double>& ranks_b) {
  if (ranks_a.size() != ranks_b.size())
    throw DataError("spearman_rho: rank vectors differ in length");
  if (ranks_a.empty()) throw DataError("spearman_rho: empty rank vectors");
  const double n = static_cast<double>(ranks_a.size());
  const double mean_a = std::accumulate(ranks_a.begin(), ranks_a.end(), 0.0) / n;
  const double mean_b = std::accumulate(ranks_b.begin(), ranks_b.end(), 0.0) / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < ranks_a.size(); ++i) {
    const double da = ranks_a[i] - mean_a;
    const double db = ranks_b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 && var_b == 0.0) return ranks_a == ranks_b ? 1.0 : 0.0;
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

std::vector<AgreementReport> agreement(const std::vector<RankOrder>& lm_rankings,
                                       const std::vector<RankOrder>& human_rankings,
                                       const std::vector<CategorySpec>& categories) {
  std::unordered_map<std::string_view, const RankOrder*> human_by_sentence;
  for (const RankOrder& order : human_rankings) human_by_sentence[order.sentence_id] = &order;
  std::unordered_map<std::string_view, const RankOrder*> lm_by_sentence;
  for (const RankOrder& order : lm_rankings) lm_by_sentence[order.sentence_id] = &order;

  if (lm_by_sentence.size() != lm_rankings.size())
    throw DataError("agreement: duplicate sentence in LM rankings");
  if (human_by_sentence.size() != human_rankings.size())
    throw DataError("agreement: duplicate sentence in human rankings");

  std::set<std::string> only_lm, only_human;
  for (const RankOrder& order : lm_rankings)
    if (!human_by_sentence.contains(order.sentence_id)) only_lm.insert(order.sentence_id);
  for (const RankOrder& order : human_rankings)
    if (!lm_by_sentence.contains(order.sentence_id)) only_human.insert(order.sentence_id);
  if (!only_lm.empty() || !only_human.empty()) {
    std::string msg = "agreement: sentence sets differ;";
    if (!only_lm.empty()) {
      msg += " only in LM rankings:";
      for (const std::string& id : only_lm) msg += " " + id;
      msg += ";";
    }
    if (!only_human.empty()) {
      msg += " only in human rankings:";
      for (const std::string& id : only_human) msg += " " + id;
    }
    throw DataError(msg);
  }

  for (const RankOrder& lm : lm_rankings) {
    const RankOrder& human = *human_by_sentence.at(lm.sentence_id);
    std::set<std::string> lm_engines(lm.engines.begin(), lm.engines.end());
    std::set<std::string> human_engines(human.engines.begin(), human.engines.end());
    if (lm_engines != human_engines)
      throw DataError("agreement: engine sets differ for sentence \"" + lm.sentence_id + "\"");
  }

  std::vector<AgreementReport> reports;
  for (const CategorySpec& category : categories) {
    AgreementReport report;
    report.category = category.name;
    report.sentence_count = lm_rankings.size();
    report.lm_tally = top_rank_tally(lm_rankings, category);
    report.human_tally = top_rank_tally(human_rankings, category);

    const std::unordered_set<std::string_view> members(category.engine_ids.begin(),
                                                       category.engine_ids.end());
    std::uint64_t top_matches = 0;
    double rho_sum = 0.0;
    for (const RankOrder& lm : lm_rankings) {
      const RankOrder& human = *human_by_sentence.at(lm.sentence_id);
      const std::vector<std::size_t> lm_kept = restrict_to(lm, members);
      const std::vector<std::size_t> human_kept = restrict_to(human, members);
      if (lm.engines[lm_kept.front()] == human.engines[human_kept.front()]) ++top_matches;

      // Rank vectors over the category engines, in LM-restricted order.
      std::vector<double> lm_keys, human_keys;
      for (std::size_t i : lm_kept) lm_keys.push_back(lm.keys[i]);
      for (std::size_t i : human_kept) human_keys.push_back(human.keys[i]);
      const std::vector<double> lm_ranks = average_ranks(lm_keys);
      const std::vector<double> human_ranks = average_ranks(human_keys);

      std::unordered_map<std::string_view, double> human_rank_by_engine;
      for (std::size_t k = 0; k < human_kept.size(); ++k)
        human_rank_by_engine[human.engines[human_kept[k]]] = human_ranks[k];
      std::vector<double> paired_human;
      for (std::size_t i : lm_kept) paired_human.push_back(human_rank_by_engine.at(lm.engines[i]));
      rho_sum += spearman_rho(lm_ranks, paired_human);
    }
    const double n = static_cast<double>(lm_rankings.size());
    report.top1_agreement = n == 0.0 ? 0.0 : static_cast<double>(top_matches) / n;
    report.mean_spearman = n == 0.0 ? 0.0 : rho_sum / n;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<HumanScoreSheet> load_human_scores(std::istream& in, std::string_view source_name) {
  std::vector<HumanScoreSheet> sheets;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string context = std::string(source_name) + ":" + std::to_string(line_no);

    const std::vector<std::string> fields = split_tabs_copy(line);
    if (fields.size() != 12)
      throw ParseError(context + ": expected sentence_id, engine_id and 10 scores (12 columns), got " +
                       std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty())
      throw ParseError(context + ": empty sentence or engine id");

    HumanScoreSheet sheet;
    sheet.sentence_id = fields[0];
    sheet.engine_id = fields[1];
    for (std::size_t i = 0; i < 10; ++i) {
      const std::string& f = fields[i + 2];
      int value = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ParseError(context + ": unparsable score \"" + f + "\"");
      if (value < 1 || value > 5)
        throw ParseError(context + ": score " + std::to_string(value) + " outside 1..5");
      sheet.scores[i] = value;
    }
    if (!seen.emplace(sheet.sentence_id, sheet.engine_id).second)
      throw DataError(context + ": duplicate scores for sentence \"" + sheet.sentence_id +
                      "\", engine \"" + sheet.engine_id + "\"");
    sheets.push_back(std::move(sheet));
  }
  return sheets;
}

std::vector<HumanScoreSheet> load_human_scores_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open human score file: " + path.string());
  return load_human_scores(in, path.string());
}

std::vector<RankOrder> human_rank_all(const std::vector<HumanScoreSheet>& sheets) {
  // Group by sentence, keeping file order within each sentence.
  std::map<std::string, std::vector<HumanScoreSheet>> grouped;
  for (const HumanScoreSheet& sheet : sheets) grouped[sheet.sentence_id].push_back(sheet);
  std::vector<RankOrder> orders;
  orders.reserve(grouped.size());
  for (const auto& [sentence_id, group] : grouped) orders.push_back(human_rank(group));
  return orders;
}

void write_agreement_reports(std::ostream& out, const std::vector<AgreementReport>& reports,
                             const std::vector<CategorySpec>& categories,
                             const std::vector<std::string>& provenance) {
  for (const std::string& line : provenance) out << line << '\n';
  std::unordered_map<std::string_view, const CategorySpec*> spec_by_name;
  for (const CategorySpec& category : categories) spec_by_name[category.name] = &category;
  for (const AgreementReport& report : reports) {
    out << "== category\t" << report.category << '\n';
    out << "sentences\t" << report.sentence_count << '\n';
    out << "engine\tlm_top1\thuman_top1\n";
    const CategorySpec* spec = spec_by_name.contains(report.category)
                                   ? spec_by_name.at(report.category)
                                   : nullptr;
    std::vector<std::string> engines;
    if (spec != nullptr) {
      engines = spec->engine_ids;
    } else {
      for (const auto& [engine, cnt] : report.lm_tally) engines.push_back(engine);
    }
    for (const std::string& engine : engines)
      out << engine << '\t' << report.lm_tally.at(engine) << '\t' << report.human_tally.at(engine)
          << '\n';
    // Statistics beyond the per-engine tallies; reported for convenience.
    out << "top1_agreement\t" << format_probability(report.top1_agreement) << '\n';
    out << "mean_spearman\t" << format_probability(report.mean_spearman) << '\n';
    out << '\n';
  }
}

}  // namespace lmrank
