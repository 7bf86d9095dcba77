#pragma once

#include <stdexcept>
#include <string>

namespace varbound {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain arguments (dimension mismatch, delta <= 0, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A bound was requested for weights outside its hypothesis class.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// A user-supplied covariance kernel is not a valid kernel.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// A mathematical invariant failed beyond tolerance.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace varbound
