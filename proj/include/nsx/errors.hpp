#pragma once

#include <stdexcept>
#include <string>

namespace nsx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the domain of a metric (e.g. not a probability vector).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A simplex altitude fell below the degeneracy tolerance.
/// Callers may recover by choosing different reference objects.
class DegenerateSimplex : public Error {
 public:
  using Error::Error;
};

/// A radicand was negative beyond tolerance: the supplied distances cannot be
/// realised in Euclidean space.
class NotEmbeddable : public Error {
 public:
  using Error::Error;
};

/// Numerical invariant violated inside a computation that should not fail.
class InternalError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsx
