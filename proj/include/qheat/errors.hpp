#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qheat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A spectrum was queried at a frequency where it is not defined (omega = 0).
class InvalidFrequency : public Error {
 public:
  using Error::Error;
};

/// No coupling at the requested frequency, so the local temperature is undefined.
class UndefinedChannel : public Error {
 public:
  using Error::Error;
};

/// A tabulated function was evaluated outside its grid.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Dissipation does not select a steady state (all rates vanish).
class NoCoupling : public Error {
 public:
  using Error::Error;
};

/// An engine-only quantity was requested outside the engine regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class NonErgodic : public Error {
 public:
  NonErgodic(const std::string& what, std::size_t kernel_dimension)
      : Error(what), kernel_dimension_(kernel_dimension) {}
  std::size_t kernel_dimension() const noexcept { return kernel_dimension_; }

 private:
  std::size_t kernel_dimension_;
};

/// Trace drift, large negative eigenvalues and similar integrity failures.
class NumericalIntegrity : public Error {
 public:
  using Error::Error;
};

class InsufficientSampling : public Error {
 public:
  using Error::Error;
};

/// Bookkeeping contradiction, e.g. negative power without incoming heat.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

/// Raised by the Spohn check when a channel produces negative entropy.
class SpohnViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qheat
