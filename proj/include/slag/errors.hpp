#pragma once

#include <stdexcept>
#include <string>

namespace slag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (bad dimension,
/// phase out of range, matrix on the degenerate locus where undefined, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a theorem-level operation does not hold for the data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (JSON, CSV, configuration, expressions).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or linear solve failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap or stagnated.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Rejection sampler ran out of budget.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace slag
