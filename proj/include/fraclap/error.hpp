#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Raised when inputs violate a documented precondition. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot produce a trustworthy result (non-finite values,
/// failed factorization, broken maximum principle). The CLI maps it to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace fraclap
