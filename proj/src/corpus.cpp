#include "lmrank/corpus.hpp"

#include <fstream>
#include <istream>
#include <stdexcept>
#include <utility>

#include "lmrank/errors.hpp"
#include "lmrank/unicode.hpp"

namespace lmrank {

namespace {

// Sentence-terminal punctuation detached by the tokenizer: ASCII . ! ? ,
// and the Devanagari danda U+0964. Everything else stays attached.
bool is_detachable_punct(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U',' || cp == U'।';
}

bool has_whitespace(std::string_view utf8) {
  for (char32_t cp : unicode::decode_utf8(utf8))
    if (unicode::is_whitespace(cp)) return true;
  return false;
}

// Emits one whitespace-free fragment, splitting trailing detachable
// punctuation off as standalone tokens.
void emit_fragment(std::vector<Token>& out, std::u32string_view frag) {
  std::size_t end = frag.size();
  while (end > 1 && is_detachable_punct(frag[end - 1])) --end;
  out.push_back(Token::unchecked(unicode::encode_utf8(frag.substr(0, end))));
  for (std::size_t k = end; k < frag.size(); ++k)
    out.push_back(Token::unchecked(unicode::encode_utf8(frag.substr(k, 1))));
}

}  // namespace

Token Token::make(std::string surface) {
  if (surface.empty()) throw std::invalid_argument("token surface must be non-empty");
  if (has_whitespace(surface))
    throw std::invalid_argument("token surface must not contain whitespace: \"" + surface + "\"");
  if (!unicode::is_nfc(surface))
    throw std::invalid_argument("token surface must be NFC-normalized: \"" + surface + "\"");
  return Token(std::move(surface));
}

Ngram::Ngram(std::vector<std::string> words) : Ngram(NoCheck{}, std::move(words)) {
  if (words_.empty() || words_.size() > 3)
    throw std::invalid_argument("ngram order must be 1, 2 or 3");
  for (const std::string& w : words_) {
    if (w.empty()) throw std::invalid_argument("ngram words must be non-empty");
    if (has_whitespace(w))
      throw std::invalid_argument("ngram words must not contain whitespace: \"" + w + "\"");
  }
}

Ngram::Ngram(NoCheck, std::vector<std::string> words) : words_(std::move(words)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i > 0) key_.push_back(' ');
    key_ += words_[i];
  }
}

Ngram Ngram::unchecked(std::vector<std::string> words) {
  return Ngram(NoCheck{}, std::move(words));
}

TokenSequence tokenize(std::string_view raw, std::string sentence_id) {
  TokenSequence seq;
  seq.sentence_id = std::move(sentence_id);
  if (raw.empty()) return seq;

  const std::u32string cps = unicode::decode_utf8(unicode::to_nfc(raw));
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    while (i < n && unicode::is_whitespace(cps[i])) ++i;
    const std::size_t start = i;
    while (i < n && !unicode::is_whitespace(cps[i])) ++i;
    if (i > start) emit_fragment(seq.tokens, std::u32string_view(cps).substr(start, i - start));
  }
  return seq;
}

std::vector<Ngram> extract_ngrams(const TokenSequence& seq, int order) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("ngram order must be 1, 2 or 3, got " + std::to_string(order));
  std::vector<Ngram> out;
  const std::size_t n = seq.tokens.size();
  const auto width = static_cast<std::size_t>(order);
  if (n < width) return out;
  out.reserve(n - width + 1);
  for (std::size_t i = 0; i + width <= n; ++i) {
    std::vector<std::string> words;
    words.reserve(width);
    for (std::size_t k = 0; k < width; ++k) words.push_back(seq.tokens[i + k].surface());
    out.push_back(Ngram::unchecked(std::move(words)));
  }
  return out;
}

std::vector<TokenSequence> read_corpus(std::istream& in, std::string_view source_name) {
  std::vector<TokenSequence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      sentences.push_back(tokenize(line, std::to_string(line_no)));
    } catch (const ParseError& e) {
      throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sentences;
}

std::vector<TokenSequence> read_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file: " + path.string());
  return read_corpus(in, path.string());
}

}  // namespace lmrank
