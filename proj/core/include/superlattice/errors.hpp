#pragma once

#include <stdexcept>
#include <string>

namespace superlattice {

// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An internal series or self-check failed its accuracy target.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// Adaptive refinement or integration hit its resource ceiling.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// A width measurement found no strict central maximum.
class FlatFieldError : public DomainError {
 public:
  using DomainError::DomainError;
};

class WindowTooSmallError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace superlattice
