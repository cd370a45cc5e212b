#pragma once

#include <stdexcept>
#include <string>

namespace indefsl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (schema violations, invalid coefficients, bad flags).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis required by a bound or a count does not hold for the given problem.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Integrator, contour or eigensolver failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace indefsl
