#ifndef LMRANK_LM_HPP
#define LMRANK_LM_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmrank/corpus.hpp"

namespace lmrank {

// Per-order type and token tallies for one corpus.
struct CorpusStats {
  std::uint64_t sentence_count = 0;
  std::uint64_t distinct_unigrams = 0;
  std::uint64_t distinct_bigrams = 0;
  std::uint64_t distinct_trigrams = 0;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_bigrams = 0;   // bigram windows
  std::uint64_t total_trigrams = 0;  // trigram windows

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Denominator used for unigram probabilities. kTokens (the default) divides
// by the token total so the unigram distribution sums to 1; kVocab divides
// by the number of distinct unigrams.
enum class UnigramDenominator { kTokens, kVocab };

std::string_view to_string(UnigramDenominator mode);
UnigramDenominator parse_unigram_denominator(std::string_view name);

// Maximum-likelihood n-gram counts for orders 1-3 over one language's
// corpus. Counts are exact integers; probabilities are derived on demand.
// Immutable once built; concurrent reads are safe.
class NgramModel {
 public:
  NgramModel() = default;

  const std::string& language_tag() const { return language_tag_; }
  UnigramDenominator unigram_denominator() const { return denominator_; }

  bool empty() const { return counts_[0].empty(); }
  std::uint64_t total_tokens() const { return totals_[0]; }
  std::uint64_t vocab_size() const { return counts_[0].size(); }

  std::uint64_t count(const Ngram& g) const;
  bool contains(const Ngram& g) const { return count(g) > 0; }

  // Unseen words yield 0. Throws EmptyModelError when the model is empty.
  double prob_unigram(std::string_view w) const;

  // Conditional MLE probabilities. The denominator is the number of stored
  // n-grams extending the prefix, which makes each observed conditional
  // distribution sum to exactly 1; unseen prefixes yield 0.
  double prob_bigram(std::string_view w1, std::string_view w2) const;
  double prob_trigram(std::string_view w1, std::string_view w2, std::string_view w3) const;

  CorpusStats stats(std::uint64_t sentence_count) const;

  // Distinct keys of one order, sorted by descending count then ascending
  // key. This is the serialization order of model files.
  std::vector<std::pair<std::string, std::uint64_t>> sorted_records(int order) const;

 private:
  friend class NgramModelBuilder;

  void require_non_empty() const;

  std::string language_tag_;
  UnigramDenominator denominator_ = UnigramDenominator::kTokens;
  // counts_[n-1]: canonical n-gram key -> occurrence count.
  std::array<std::unordered_map<std::string, std::uint64_t>, 3> counts_;
  // totals_[n-1]: sum of all order-n counts (order-n window total).
  std::array<std::uint64_t, 3> totals_ = {0, 0, 0};
  // w1 -> number of bigrams starting with w1; "w1 w2" -> trigrams with that prefix.
  std::unordered_map<std::string, std::uint64_t> bigram_prefix_totals_;
  std::unordered_map<std::string, std::uint64_t> trigram_prefix_totals_;
};

// Accumulates sentence tallies (or whole other models) and finalizes into an
// immutable NgramModel. Ingestion order never affects the result.
class NgramModelBuilder {
 public:
  explicit NgramModelBuilder(std::string language_tag,
                             UnigramDenominator mode = UnigramDenominator::kTokens);

  void add(const TokenSequence& sentence);
  void add_counts(const NgramModel& other);  // language tags must agree

  // Accumulates one already-counted record (model file loading).
  void add_record(int order, const std::string& key, std::uint64_t count);

  NgramModel build() &&;

 private:
  NgramModel model_;
};

NgramModel train(const std::vector<TokenSequence>& sentences, std::string language_tag,
                 UnigramDenominator mode = UnigramDenominator::kTokens);

// Model files: UTF-8 TSV, `key<TAB>count<TAB>probability` records grouped in
// per-order sections, each section sorted by descending count then ascending
// key. Counts are authoritative on load; the probability column is
// informational (12 significant digits). Leading `#` comment lines before
// the header are free-form provenance and survive a load/save round trip.
struct LoadedModel {
  NgramModel model;
  std::vector<std::string> provenance;
};

void save_model(const NgramModel& model, std::ostream& out,
                const std::vector<std::string>& provenance = {});
void save_model_file(const NgramModel& model, const std::filesystem::path& path,
                     const std::vector<std::string>& provenance = {});
LoadedModel load_model(std::istream& in, std::string_view source_name);
LoadedModel load_model_file(const std::filesystem::path& path);

// 12-significant-digit shortest form used for all probability columns.
std::string format_probability(double p);

}  // namespace lmrank

#endif  // LMRANK_LM_HPP
