#pragma once

#include <stdexcept>
#include <string>

namespace fint {

// Bad input: violated preconditions, malformed specs, unsupported combinations.
// The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that ran but could not meet its accuracy contract
// (non-convergent series, ill-conditioned solve, non-finite integrand).
// The CLI maps these to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace fint
