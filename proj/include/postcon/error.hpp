#pragma once

#include <stdexcept>
#include <string>

namespace postcon {

// Bad arguments or structural constants. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation point outside a density's support.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Quadrature, root finding or refinement ran out of budget. Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace postcon
