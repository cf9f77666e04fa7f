#pragma once

#include <stdexcept>
#include <string>

namespace klab {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point outside the chart domain, or a vector outside the required subspace.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The structure is not written in an adapted chart (xi != d_0).
class NotAdaptedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Singular metric, dependent plane, vanishing vector.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Tensor variance or manifold source the operation does not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A constructed object violates its structural invariants.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Inputs fail an operation's numerical precondition.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Invalid configuration or arguments supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace klab
