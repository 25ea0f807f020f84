#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volcone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two classes (or a class and a geometry) come from different lattices.
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

/// A geometry document does not conform to the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The intersection form violates the Hodge index theorem.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked for data the geometry does not carry.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// The input lies outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The class is not pseudo-effective relative to the negative-curve catalog.
class NotPseudoEffective : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The negative-curve catalog contradicts the intersection form.
class CatalogInconsistency : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input; `position()` is the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace volcone
