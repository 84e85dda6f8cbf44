// Command-line surface: train n-gram models from monolingual corpora, rank
// machine translation outputs through a parallel lexicon, and compare the
// resulting rankings against human judgment sheets.
#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmrank/corpus.hpp"
#include "lmrank/digest.hpp"
#include "lmrank/errors.hpp"
#include "lmrank/eval.hpp"
#include "lmrank/lexicon.hpp"
#include "lmrank/lm.hpp"
#include "lmrank/ranked_output.hpp"
#include "lmrank/ranker.hpp"
#include "lmrank/version.hpp"

namespace {

using namespace lmrank;

constexpr int kExitUsage = 2;  // bad flags or configuration
constexpr int kExitParse = 3;  // malformed input files
constexpr int kExitData = 4;   // inputs inconsistent with each other

std::string tool_banner() {
  return std::string(kToolName) + " " + std::string(kToolVersion);
}

// Deterministic provenance headers carried by every output file: tool
// version, a hash of the effective configuration, and input file digests.
std::vector<std::string> provenance_lines(
    std::string_view command, const std::vector<std::pair<std::string, std::string>>& inputs,
    const std::string& config_dump) {
  std::vector<std::string> lines;
  lines.push_back("# generated-by\t" + tool_banner());
  lines.push_back("# command\t" + std::string(command));
  lines.push_back("# config\tfnv1a64:" + to_hex(fnv1a64(config_dump)));
  for (const auto& [role, path] : inputs)
    lines.push_back("# input\t" + role + "\t" + path + "\tfnv1a64:" + to_hex(fnv1a64_file(path)));
  return lines;
}

void print_stats(std::ostream& out, std::string_view language, const CorpusStats& stats) {
  out << "language\t" << language << '\n'
      << "sentences\t" << stats.sentence_count << '\n'
      << "tokens\t" << stats.total_tokens << '\n'
      << "distinct_unigrams\t" << stats.distinct_unigrams << '\n'
      << "distinct_bigrams\t" << stats.distinct_bigrams << '\n'
      << "distinct_trigrams\t" << stats.distinct_trigrams << '\n'
      << "bigram_windows\t" << stats.total_bigrams << '\n'
      << "trigram_windows\t" << stats.total_trigrams << '\n';
}

struct BuildLmArgs {
  std::string corpus;
  std::string language;
  std::string out;
  std::string denominator = "tokens";
};

int cmd_build_lm(const BuildLmArgs& args) {
  const UnigramDenominator mode = parse_unigram_denominator(args.denominator);
  const std::vector<TokenSequence> sentences = read_corpus_file(args.corpus);
  const NgramModel model = train(sentences, args.language, mode);
  if (model.empty())
    std::cerr << "warning: corpus " << args.corpus
              << " contains no tokens; writing an empty model\n";

  const std::string config_dump = "command=build-lm\ncorpus=" + args.corpus +
                                  "\nlanguage=" + args.language + "\nout=" + args.out +
                                  "\nunigram-denominator=" + args.denominator + "\n";
  save_model_file(model, args.out,
                  provenance_lines("build-lm", {{"corpus", args.corpus}}, config_dump));
  print_stats(std::cout, args.language, model.stats(sentences.size()));
  std::cout << "model\t" << args.out << '\n';
  return 0;
}

struct StatsArgs {
  std::string corpus;
  std::string language = "und";
};

int cmd_stats(const StatsArgs& args) {
  const std::vector<TokenSequence> sentences = read_corpus_file(args.corpus);
  const NgramModel model = train(sentences, args.language);
  print_stats(std::cout, args.language, model.stats(sentences.size()));
  return 0;
}

struct RankArgs {
  std::string sources;
  std::string candidates;
  std::string source_model;
  std::string target_model;
  std::string lexicon;
  std::string out;
  std::string coverage = "any";
  std::string source_language;
  std::string target_language;
};

int cmd_rank(const RankArgs& args) {
  const Coverage coverage = parse_coverage(args.coverage);
  const LoadedModel source_model = load_model_file(args.source_model);
  const LoadedModel target_model = load_model_file(args.target_model);
  if (!args.source_language.empty() && source_model.model.language_tag() != args.source_language)
    throw DataError("source model " + args.source_model + " carries language tag \"" +
                    source_model.model.language_tag() + "\" but the configured direction is \"" +
                    args.source_language + "\"");
  if (!args.target_language.empty() && target_model.model.language_tag() != args.target_language)
    throw DataError("target model " + args.target_model + " carries language tag \"" +
                    target_model.model.language_tag() + "\" but the configured direction is \"" +
                    args.target_language + "\"");

  const ParallelLexicon lexicon =
      load_lexicon_file(args.lexicon, args.source_language, args.target_language);
  const std::map<std::string, TokenSequence> sources = load_sources_file(args.sources);
  const std::map<std::string, std::vector<Candidate>> candidates =
      load_candidates_file(args.candidates);

  std::vector<RankedList> lists;
  lists.reserve(candidates.size());
  for (const auto& [sentence_id, sentence_candidates] : candidates) {
    const auto source_it = sources.find(sentence_id);
    if (source_it == sources.end())
      throw DataError("sentence \"" + sentence_id + "\" in " + args.candidates +
                      " has no source sentence in " + args.sources);
    lists.push_back(rank(source_it->second, sentence_candidates, source_model.model,
                         target_model.model, lexicon, coverage));
  }

  const std::string config_dump =
      "command=rank\nsources=" + args.sources + "\ncandidates=" + args.candidates +
      "\nsource-model=" + args.source_model + "\ntarget-model=" + args.target_model +
      "\nlexicon=" + args.lexicon + "\nout=" + args.out + "\ncoverage=" + args.coverage +
      "\nsource-language=" + args.source_language + "\ntarget-language=" + args.target_language +
      "\n";
  write_ranked_output_file(args.out, lists,
                           provenance_lines("rank",
                                            {{"sources", args.sources},
                                             {"candidates", args.candidates},
                                             {"source-model", args.source_model},
                                             {"target-model", args.target_model},
                                             {"lexicon", args.lexicon}},
                                            config_dump));
  std::cout << "sentences\t" << lists.size() << '\n' << "ranked\t" << args.out << '\n';
  return 0;
}

struct EvaluateArgs {
  std::string ranked;
  std::string human_scores;
  std::string out;
  std::vector<std::string> categories;
};

std::vector<CategorySpec> parse_categories(const std::vector<std::string>& raw,
                                           const std::vector<RankOrder>& lm_orders) {
  std::vector<CategorySpec> categories;
  std::set<std::string> names;
  for (const std::string& spec : raw) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
      throw ConfigError("category must look like name=E1,E2,... got \"" + spec + "\"");
    CategorySpec category;
    category.name = spec.substr(0, eq);
    if (!names.insert(category.name).second)
      throw ConfigError("duplicate category name \"" + category.name + "\"");
    std::size_t start = eq + 1;
    while (start <= spec.size()) {
      const std::size_t comma = spec.find(',', start);
      const std::string engine =
          spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (engine.empty()) throw ConfigError("empty engine id in category \"" + spec + "\"");
      category.engine_ids.push_back(engine);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    categories.push_back(std::move(category));
  }
  if (categories.empty()) {
    // Default: one category over every engine seen, in first-appearance order.
    CategorySpec combined;
    combined.name = "combined";
    std::set<std::string> seen;
    for (const RankOrder& order : lm_orders)
      for (const std::string& engine : order.engines)
        if (seen.insert(engine).second) combined.engine_ids.push_back(engine);
    if (combined.engine_ids.empty()) throw DataError("ranked input contains no engines");
    categories.push_back(std::move(combined));
  }
  return categories;
}

int cmd_evaluate(const EvaluateArgs& args) {
  const std::vector<RankedList> ranked = read_ranked_output_file(args.ranked);
  std::vector<RankOrder> lm_orders;
  lm_orders.reserve(ranked.size());
  for (const RankedList& list : ranked) lm_orders.push_back(to_rank_order(list));

  const std::vector<HumanScoreSheet> sheets = load_human_scores_file(args.human_scores);
  const std::vector<RankOrder> human_orders = human_rank_all(sheets);

  // Coverage check with explicit pair listing before the comparison runs.
  std::set<std::pair<std::string, std::string>> lm_pairs, human_pairs;
  for (const RankOrder& order : lm_orders)
    for (const std::string& engine : order.engines) lm_pairs.emplace(order.sentence_id, engine);
  for (const RankOrder& order : human_orders)
    for (const std::string& engine : order.engines) human_pairs.emplace(order.sentence_id, engine);
  if (lm_pairs != human_pairs) {
    std::string msg = "ranked output and human scores cover different (sentence, engine) pairs;";
    for (const auto& pair : lm_pairs)
      if (!human_pairs.contains(pair))
        msg += " missing from human scores: (" + pair.first + ", " + pair.second + ")";
    for (const auto& pair : human_pairs)
      if (!lm_pairs.contains(pair))
        msg += " missing from ranked output: (" + pair.first + ", " + pair.second + ")";
    throw DataError(msg);
  }

  const std::vector<CategorySpec> categories = parse_categories(args.categories, lm_orders);
  const std::vector<AgreementReport> reports = agreement(lm_orders, human_orders, categories);

  std::string config_dump = "command=evaluate\nranked=" + args.ranked +
                            "\nhuman-scores=" + args.human_scores + "\nout=" + args.out + "\n";
  for (const CategorySpec& category : categories) {
    config_dump += "category=" + category.name + "=";
    for (std::size_t i = 0; i < category.engine_ids.size(); ++i) {
      if (i > 0) config_dump += ",";
      config_dump += category.engine_ids[i];
    }
    config_dump += "\n";
  }

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open report file for writing: " + args.out);
  write_agreement_reports(out, reports, categories,
                          provenance_lines("evaluate",
                                           {{"ranked", args.ranked},
                                            {"human-scores", args.human_scores}},
                                           config_dump));
  out.flush();
  if (!out) throw DataError("failed writing report file: " + args.out);

  for (const AgreementReport& report : reports)
    std::cout << "category\t" << report.category << "\ttop1_agreement\t"
              << format_probability(report.top1_agreement) << "\tmean_spearman\t"
              << format_probability(report.mean_spearman) << '\n';
  std::cout << "report\t" << args.out << '\n';
  return 0;
}

struct LexiconCheckArgs {
  std::string lexicon;
  std::string corpus;
};

int cmd_lexicon_check(const LexiconCheckArgs& args) {
  const ParallelLexicon lexicon = load_lexicon_file(args.lexicon);
  std::cout << "lexicon\t" << args.lexicon << '\n'
            << "source_words\t" << lexicon.source_count() << '\n'
            << "pairs\t" << lexicon.pair_count() << '\n';
  if (!args.corpus.empty()) {
    const std::vector<TokenSequence> sentences = read_corpus_file(args.corpus);
    std::set<std::string> vocabulary;
    for (const TokenSequence& sentence : sentences)
      for (const Token& token : sentence.tokens) vocabulary.insert(token.surface());
    std::uint64_t covered = 0;
    for (const std::string& word : vocabulary)
      if (!lexicon.lookup(word).empty()) ++covered;
    std::cout << "corpus_vocabulary\t" << vocabulary.size() << '\n'
              << "covered\t" << covered << '\n'
              << "coverage\t"
              << format_probability(vocabulary.empty()
                                        ? 0.0
                                        : static_cast<double>(covered) /
                                              static_cast<double>(vocabulary.size()))
              << '\n';
  }
  return 0;
}

template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

void require_exists(const std::string& flag, const std::string& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError(flag + " path does not exist: " + path);
}

// Config files are flat `key = value` text, one option per line, `#`
// comments allowed. Values are injected as trailing `--key value` arguments
// for every key not already given on the command line, so flags win.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  std::string config_path;
  std::set<std::string> given_flags;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string flag = args[i];
    if (flag.rfind("--", 0) != 0) continue;
    std::string value;
    const std::size_t eq = flag.find('=');
    if (eq != std::string::npos) {
      value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
    } else if (i + 1 < args.size()) {
      value = args[i + 1];
    }
    given_flags.insert(flag);
    if (flag == "--config") config_path = value;
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + config_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(config_path + ":" + std::to_string(line_no) +
                        ": expected key=value, got \"" + line + "\"");
    const auto trim = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(config_path + ":" + std::to_string(line_no) + ": empty key");
    if (key == "config")
      throw ConfigError(config_path + ":" + std::to_string(line_no) +
                        ": config files cannot nest");
    if (!given_flags.contains("--" + key)) {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-gram language model toolkit for ranking machine translation outputs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_banner());
  app.failure_message(CLI::FailureMessage::help);

  std::string config_sink;
  const char* config_help = "key=value file with the same names as the flags; flags win";

  BuildLmArgs build_args;
  CLI::App* build = app.add_subcommand(
      "build-lm", "train a maximum-likelihood n-gram model from a one-sentence-per-line corpus");
  build->add_option("--config", config_sink, config_help);
  build->add_option("--corpus", build_args.corpus, "corpus file, one sentence per line")
      ->required();
  build->add_option("--language", build_args.language, "language tag stored in the model")
      ->required();
  build->add_option("--out", build_args.out, "model file to write")->required();
  build->add_option("--unigram-denominator", build_args.denominator,
                    "unigram probability denominator: tokens or vocab")
      ->capture_default_str();

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "print per-order type and token counts of a corpus");
  stats->add_option("--config", config_sink, config_help);
  stats->add_option("--corpus", stats_args.corpus, "corpus file, one sentence per line")
      ->required();
  stats->add_option("--language", stats_args.language, "language tag for the report");

  RankArgs rank_args;
  CLI::App* rank_cmd = app.add_subcommand(
      "rank", "rank candidate translations by summed target-model trigram probabilities");
  rank_cmd->add_option("--config", config_sink, config_help);
  rank_cmd->add_option("--sources", rank_args.sources, "TSV: sentence_id<TAB>source-text")
      ->required();
  rank_cmd
      ->add_option("--candidates", rank_args.candidates,
                   "TSV: sentence_id<TAB>engine_id<TAB>translation-text")
      ->required();
  rank_cmd->add_option("--source-model", rank_args.source_model, "source-language model file")
      ->required();
  rank_cmd->add_option("--target-model", rank_args.target_model, "target-language model file")
      ->required();
  rank_cmd->add_option("--lexicon", rank_args.lexicon, "TSV: source<TAB>target[<TAB>weight]")
      ->required();
  rank_cmd->add_option("--out", rank_args.out, "ranked output file to write")->required();
  rank_cmd
      ->add_option("--coverage", rank_args.coverage,
                   "registered words required per trigram: any, majority or all")
      ->capture_default_str();
  rank_cmd->add_option("--source-language", rank_args.source_language,
                       "expected source model language tag");
  rank_cmd->add_option("--target-language", rank_args.target_language,
                       "expected target model language tag");

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "compare a ranked output file against human judgment sheets");
  evaluate->add_option("--config", config_sink, config_help);
  evaluate->add_option("--ranked", eval_args.ranked, "ranked output file from `rank`")
      ->required();
  evaluate
      ->add_option("--human-scores", eval_args.human_scores,
                   "TSV: sentence_id<TAB>engine_id<TAB>ten 1-5 scores")
      ->required();
  evaluate->add_option("--out", eval_args.out, "agreement report file to write")->required();
  evaluate->add_option("--category", eval_args.categories,
                       "engine subset to compare, name=E1,E2,... (repeatable; default: all engines)");

  LexiconCheckArgs lex_args;
  CLI::App* lexcheck = app.add_subcommand(
      "lexicon-check", "validate a lexicon file and report corpus vocabulary coverage");
  lexcheck->add_option("--config", config_sink, config_help);
  lexcheck->add_option("--lexicon", lex_args.lexicon, "TSV: source<TAB>target[<TAB>weight]")
      ->required();
  lexcheck->add_option("--corpus", lex_args.corpus, "corpus whose vocabulary coverage to report");

  try {
    std::vector<std::string> args = merge_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (build->parsed())
    return run_guarded([&] {
      require_exists("--corpus", build_args.corpus);
      return cmd_build_lm(build_args);
    });
  if (stats->parsed())
    return run_guarded([&] {
      require_exists("--corpus", stats_args.corpus);
      return cmd_stats(stats_args);
    });
  if (rank_cmd->parsed())
    return run_guarded([&] {
      require_exists("--sources", rank_args.sources);
      require_exists("--candidates", rank_args.candidates);
      require_exists("--source-model", rank_args.source_model);
      require_exists("--target-model", rank_args.target_model);
      require_exists("--lexicon", rank_args.lexicon);
      return cmd_rank(rank_args);
    });
  if (evaluate->parsed())
    return run_guarded([&] {
      require_exists("--ranked", eval_args.ranked);
      require_exists("--human-scores", eval_args.human_scores);
      return cmd_evaluate(eval_args);
    });
  if (lexcheck->parsed())
    return run_guarded([&] {
      require_exists("--lexicon", lex_args.lexicon);
      if (!lex_args.corpus.empty()) require_exists("--corpus", lex_args.corpus);
      return cmd_lexicon_check(lex_args);
    });
  return kExitUsage;
}
