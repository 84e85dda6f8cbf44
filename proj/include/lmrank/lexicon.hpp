#ifndef LMRANK_LEXICON_HPP
#define LMRANK_LEXICON_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmrank/corpus.hpp"

namespace lmrank {

// One target-side word reachable from a source word. Alignment weights are
// parsed and preserved when present but never influence ranking.
struct LexiconEntry {
  std::string target;
  std::optional<double> weight;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// One-to-many source-word -> target-word mapping. Entries are NFC-normalized
// single words; target lists keep file order and are duplicate-free.
// Immutable after load; concurrent reads are safe.
class ParallelLexicon {
 public:
  ParallelLexicon() = default;
  ParallelLexicon(std::string source_language, std::string target_language)
      : source_language_(std::move(source_language)),
        target_language_(std::move(target_language)) {}

  const std::string& source_language() const { return source_language_; }
  const std::string& target_language() const { return target_language_; }

  // Repeated (source, target) pairs are dropped silently (first weight wins).
  void add(std::string_view source, std::string_view target,
           std::optional<double> weight = std::nullopt);

  // Exact-match lookup on the token surface; unknown words yield the empty list.
  const std::vector<LexiconEntry>& lookup(std::string_view source_word) const;

  // Source words in first-appearance order.
  const std::vector<std::string>& sources() const { return source_order_; }

  std::uint64_t source_count() const { return source_order_.size(); }
  std::uint64_t pair_count() const { return pair_count_; }

  friend bool operator==(const ParallelLexicon& a, const ParallelLexicon& b);

 private:
  std::string source_language_;
  std::string target_language_;
  std::unordered_map<std::string, std::vector<LexiconEntry>> entries_;
  std::vector<std::string> source_order_;
  std::uint64_t pair_count_ = 0;
};

// Lexicon files: UTF-8 TSV `source<TAB>target[<TAB>weight]`, one pair per
// line; `#` comment lines and blank lines are ignored. Malformed lines
// (wrong column count, empty fields, multi-word fields, unparsable weights)
// raise ParseError with the line number.
ParallelLexicon load_lexicon(std::istream& in, std::string_view source_name,
                             std::string source_language = {}, std::string target_language = {});
ParallelLexicon load_lexicon_file(const std::filesystem::path& path,
                                  std::string source_language = {},
                                  std::string target_language = {});
void save_lexicon(const ParallelLexicon& lex, std::ostream& out);

// Union of lookup() over every word of every retained n-gram: the registered
// target-word set, duplicate-free, in first-registration order.
std::vector<std::string> project(const ParallelLexicon& lex, const std::vector<Ngram>& retained);

}  // namespace lmrank

#endif  // LMRANK_LEXICON_HPP
