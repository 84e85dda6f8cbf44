#include "lmrank/unicode.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include <string>

#include "lmrank/errors.hpp"

namespace lmrank::unicode {

namespace {

[[noreturn]] void bad_utf8(std::size_t offset) {
  throw ParseError("invalid UTF-8 at byte offset " + std::to_string(offset));
}

const UNormalizer2* nfc_instance() {
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec) || norm == nullptr)
    throw std::runtime_error("ICU NFC normalizer unavailable");
  return norm;
}

std::u16string utf8_to_utf16(std::string_view utf8) {
  std::u16string out(utf8.size() + 1, u'\0');
  UErrorCode ec = U_ZERO_ERROR;
  int32_t len = 0;
  u_strFromUTF8(out.data(), static_cast<int32_t>(out.size()), &len, utf8.data(),
                static_cast<int32_t>(utf8.size()), &ec);
  if (ec == U_INVALID_CHAR_FOUND || ec == U_ILLEGAL_CHAR_FOUND)
    throw ParseError("invalid UTF-8 input");
  if (U_FAILURE(ec)) throw std::runtime_error("UTF-8 to UTF-16 conversion failed");
  out.resize(static_cast<std::size_t>(len));
  return out;
}

std::string utf16_to_utf8(std::u16string_view utf16) {
  std::string out(utf16.size() * 4 + 1, '\0');
  UErrorCode ec = U_ZERO_ERROR;
  int32_t len = 0;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &len, utf16.data(),
              static_cast<int32_t>(utf16.size()), &ec);
  if (U_FAILURE(ec)) throw std::runtime_error("UTF-16 to UTF-8 conversion failed");
  out.resize(static_cast<std::size_t>(len));
  return out;
}

}  // namespace

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad_utf8(i);
    }
    if (i + len > n) bad_utf8(i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80) bad_utf8(i);
      cp = (cp << 6) | (bk & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinByLen[len]) bad_utf8(i);        // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) bad_utf8(i);          // surrogate
    if (cp > 0x10FFFF) bad_utf8(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size() * 2);
  for (char32_t cp : code_points) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_whitespace(char32_t cp) noexcept {
  // Code points with White_Space=Yes.
  switch (cp) {
    case 0x0009:
    case 0x000A:
    case 0x000B:
    case 0x000C:
    case 0x000D:
    case 0x0020:
    case 0x0085:
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::string to_nfc(std::string_view utf8) {
  if (utf8.empty()) return {};
  const UNormalizer2* norm = nfc_instance();
  std::u16string u16 = utf8_to_utf16(utf8);

  UErrorCode ec = U_ZERO_ERROR;
  if (unorm2_quickCheck(norm, u16.data(), static_cast<int32_t>(u16.size()), &ec) == UNORM_YES &&
      U_SUCCESS(ec))
    return std::string(utf8);

  ec = U_ZERO_ERROR;
  std::u16string normalized(u16.size() * 2 + 16, u'\0');
  int32_t len = unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()),
                                 normalized.data(), static_cast<int32_t>(normalized.size()), &ec);
  if (ec == U_BUFFER_OVERFLOW_ERROR) {
    ec = U_ZERO_ERROR;
    normalized.assign(static_cast<std::size_t>(len), u'\0');
    len = unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()), normalized.data(),
                           static_cast<int32_t>(normalized.size()), &ec);
  }
  if (U_FAILURE(ec)) throw std::runtime_error("NFC normalization failed");
  normalized.resize(static_cast<std::size_t>(len));
  return utf16_to_utf8(normalized);
}

bool is_nfc(std::string_view utf8) {
  if (utf8.empty()) return true;
  const UNormalizer2* norm = nfc_instance();
  std::u16string u16 = utf8_to_utf16(utf8);
  UErrorCode ec = U_ZERO_ERROR;
  UBool ok = unorm2_isNormalized(norm, u16.data(), static_cast<int32_t>(u16.size()), &ec);
  if (U_FAILURE(ec)) throw std::runtime_error("NFC check failed");
  return ok != 0;
}

}  // namespace lmrank::unicode
