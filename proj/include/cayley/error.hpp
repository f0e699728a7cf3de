#pragma once

#include <stdexcept>
#include <string>

namespace cayley {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed symbol spec, out-of-range parameter, mismatched kappa.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A ball or sphere would exceed the configured vertex budget, or an integer
/// count overflows.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A numerical certificate failed (eigenvalues outside [0,1], eigen residual
/// too large, recursion overflow, insufficient tail decay).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cayley
