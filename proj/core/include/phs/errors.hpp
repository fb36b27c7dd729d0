#pragma once

#include <stdexcept>
#include <string>

namespace phs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model document (missing keys, wrong JSON types, ragged arrays).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A well-formed document whose data violates a system invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the interval [0,1].
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A test was asked for while its standing assumption does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Simulation requested for a system whose operator is not a generator.
class IllPosedError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue branches cross along the grid, so the diagonalizer is not smooth.
class ContinuityError : public Error {
 public:
  using Error::Error;
};

/// Blow-up guard tripped during time stepping.
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Unknown or malformed initial-condition profile.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace phs
