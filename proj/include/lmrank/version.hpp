#ifndef LMRANK_VERSION_HPP
#define LMRANK_VERSION_HPP

#include <string_view>

namespace lmrank {

inline constexpr std::string_view kToolName = "lmrank";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace lmrank

#endif  // LMRANK_VERSION_HPP
