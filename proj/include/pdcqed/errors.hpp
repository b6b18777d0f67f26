#pragma once

#include <stdexcept>
#include <string>

namespace pdc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent user input. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Something went wrong during a computation. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonHermitianError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Refused up front because the run would not fit the budget. CLI exit code 4.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdc
