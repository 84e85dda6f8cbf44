#ifndef LMRANK_CORPUS_HPP
#define LMRANK_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lmrank {

// A single word as it participates in counting: NFC-normalized, non-empty,
// free of whitespace. All modules key their tables on Token surfaces.
class Token {
 public:
  // Validating factory for externally supplied words.
  static Token make(std::string surface);

  // Caller guarantees the invariants (used on the tokenizer output path,
  // where they hold by construction).
  static Token unchecked(std::string surface) { return Token(std::move(surface)); }

  const std::string& surface() const { return surface_; }

  friend bool operator==(const Token&, const Token&) = default;

 private:
  explicit Token(std::string s) : surface_(std::move(s)) {}
  std::string surface_;
};

struct TokenSequence {
  std::string sentence_id;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Contiguous run of 1..3 token surfaces. The canonical key joins the words
// with single ASCII spaces and is what count tables and model files use.
class Ngram {
 public:
  explicit Ngram(std::vector<std::string> words);

  static Ngram unchecked(std::vector<std::string> words);

  int order() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& key() const { return key_; }

  friend bool operator==(const Ngram& a, const Ngram& b) { return a.key_ == b.key_; }

 private:
  struct NoCheck {};
  Ngram(NoCheck, std::vector<std::string> words);

  std::vector<std::string> words_;
  std::string key_;
};

// NFC-normalizes, detaches sentence-terminal punctuation (. ! ? and the
// Devanagari danda) and commas into standalone tokens, and splits on Unicode
// whitespace. Deterministic; empty input yields an empty sequence.
TokenSequence tokenize(std::string_view raw, std::string sentence_id = {});

// Sliding window of width `order`, stride 1, no boundary padding: exactly
// max(0, len - order + 1) n-grams in source order. Order must be 1, 2 or 3.
std::vector<Ngram> extract_ngrams(const TokenSequence& seq, int order);

// Raw corpus files: UTF-8 plain text, one sentence per line; the 1-based
// line number becomes the sentence_id. A UTF-8 BOM on the first line and
// trailing carriage returns are stripped.
std::vector<TokenSequence> read_corpus(std::istream& in, std::string_view source_name);
std::vector<TokenSequence> read_corpus_file(const std::filesystem::path& path);

}  // namespace lmrank

#endif  // LMRANK_CORPUS_HPP
