#pragma once

#include <stdexcept>
#include <string>

namespace nbarrier {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter values (nonpositive rates, bad options, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes that do not match the system.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An operation was called outside its documented preconditions.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A hypothesis box with upper_i <= lower_i for some species.
class DegenerateBoxError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Profile grid is not uniform.
class UnsupportedGridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Argument outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Internal cross-check failed; carries a diagnostic message.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Singular or non-finite linear solve.
class LinearSolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace nbarrier
