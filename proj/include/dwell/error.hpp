#pragma once

#include <stdexcept>
#include <string>

namespace dwell {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model or run parameters (g <= 0, a <= 0, malformed config).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The mixing coefficient Gamma is not positive: g <= sqrt(1+a)/a.
class ConvergenceDomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Malformed computational grid.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Samples do not belong to the grid they are used with.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Base of errors raised while running a numerical procedure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OverflowGuardError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateDenominatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An iterate f_n reached a non-positive value.
class PositivityLossError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DiscretizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dwell
