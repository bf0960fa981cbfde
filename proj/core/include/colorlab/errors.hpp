#pragma once

#include <stdexcept>
#include <string>

namespace colorlab {

/// Input failed validation (bad parameters, malformed files, bad configs).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A resource guard refused the computation. The message names the guard
/// and the offending value; nothing is silently truncated.
class GuardRefusal : public std::runtime_error {
 public:
  explicit GuardRefusal(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace colorlab
