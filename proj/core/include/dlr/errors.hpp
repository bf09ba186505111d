#pragma once

#include <stdexcept>
#include <string>

namespace dlr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The envelope integrates to zero, so no amplitude produces a pi phase.
class DegeneratePulse : public Error {
 public:
  using Error::Error;
};

/// Waveform grid cannot be mapped onto the simulation grid.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NonUnitaryInput : public Error {
 public:
  using Error::Error;
};

/// A diagonal element of the propagator is too small to carry a phase.
class DegenerateDiagonal : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Malformed or unknown configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlr
