#ifndef LMRANK_DIGEST_HPP
#define LMRANK_DIGEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lmrank {

// FNV-1a 64-bit over bytes; used for provenance digests in output headers.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

}  // namespace lmrank

#endif  // LMRANK_DIGEST_HPP
