#include "lmrank/digest.hpp"

#include <cstdio>
#include <fstream>

#include "lmrank/errors.hpp"

namespace lmrank {

namespace {

constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kPrime = 0x100000001b3ULL;

std::uint64_t accumulate(std::uint64_t hash, const char* data, std::size_t size) {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= static_cast<unsigned char>(data[i]);
    hash *= kPrime;
  }
  return hash;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  return accumulate(kOffsetBasis, bytes.data(), bytes.size());
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file for digest: " + path.string());
  std::uint64_t hash = kOffsetBasis;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    hash = accumulate(hash, buf, static_cast<std::size_t>(in.gcount()));
  return hash;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace lmrank
