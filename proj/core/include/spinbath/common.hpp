#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace spinbath {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// Precondition violations (bad parameters, mismatched sizes, non-physical input).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures detected during a computation rather than at its inputs.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes that must agree did not (Kraus completeness, formula roots
/// failing polynomial validation, ...).
class InternalConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A conditional probability was requested on an event of (numerically) zero
/// probability.
class UndefinedConditionalError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A density operator with a significantly negative eigenvalue.
class InvalidStateError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Recoherence period pi / (2 alpha) of the decoherence function.
inline double recoherence_period(double alpha) { return kPi / (2.0 * alpha); }

}  // namespace spinbath
