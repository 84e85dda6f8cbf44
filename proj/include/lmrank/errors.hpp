#ifndef LMRANK_ERRORS_HPP
#define LMRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lmrank {

// Malformed input file contents (bad UTF-8, wrong column counts, unparsable
// numbers). Carries file/line context in the message where known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs that parse cleanly but contradict each other or a model invariant
// (duplicate engine ids, mismatched sentence sets, inconsistent count files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration: unknown mode names, missing input paths.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Probability query against a model with no counts.
class EmptyModelError : public DataError {
 public:
  explicit EmptyModelError(const std::string& msg) : DataError(msg) {}
};

}  // namespace lmrank

#endif  // LMRANK_ERRORS_HPP
