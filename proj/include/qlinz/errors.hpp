#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qlinz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Physical parameters violate a model invariant (Hermitian Ω, real α, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iterations = 0)
      : Error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// Evaluation requested at (or numerically at) a pole.
class PoleEvaluationError : public Error {
 public:
  PoleEvaluationError(const std::string& what, std::complex<double> pole)
      : Error(what), pole_(pole) {}
  std::complex<double> pole() const { return pole_; }

 private:
  std::complex<double> pole_;
};

/// An operation's stated hypothesis does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A theorem-backed method declines to answer because its hypothesis fails.
class RefusalError : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic was requested for data that is not exactly representable.
class ExactnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace qlinz
