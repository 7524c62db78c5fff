#pragma once

#include <stdexcept>
#include <string>

namespace qacc {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures of the numerical machinery (bad operators, degenerate samples).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class HermiticityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AntiHermiticityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when sigma_H is below the floor and a covariance quotient would be unstable.
class DegenerateSpeedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qacc
