#ifndef LMRANK_UNICODE_HPP
#define LMRANK_UNICODE_HPP

#include <string>
#include <string_view>

namespace lmrank::unicode {

// Strict UTF-8 decoding: rejects truncated sequences, overlong encodings,
// surrogate code points and anything above U+10FFFF. Throws ParseError with
// the byte offset of the offending sequence.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view code_points);

// Unicode White_Space property.
bool is_whitespace(char32_t cp) noexcept;

// Canonical composition (NFC). Throws ParseError on invalid UTF-8.
std::string to_nfc(std::string_view utf8);

// True iff the string is already in NFC (and valid UTF-8).
bool is_nfc(std::string_view utf8);

}  // namespace lmrank::unicode

#endif  // LMRANK_UNICODE_HPP
