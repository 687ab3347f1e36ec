#pragma once

#include <stdexcept>
#include <string>

namespace lyapfix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square input, wrong vector length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A linear system is singular to working precision.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// The trace (or simplex) normalizer of a fixed-point map vanished.
class DegenerateMapError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain, e.g. an unstable
/// system handed to a solver that requires stability.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure exhausted its budget or a result failed its
/// acceptance check.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A scalar map was evaluated at its pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input document.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace lyapfix
