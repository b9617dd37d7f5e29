#pragma once

#include <stdexcept>
#include <string>

namespace polydisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: inconsistent shapes, bad labels, unparsable documents.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An object that is required to satisfy its axioms does not.
class InvalidObjectError : public Error {
 public:
  using Error::Error;
};

/// A subspace family or filtration is not invariant under the structure maps.
class NotInvariantError : public Error {
 public:
  using Error::Error;
};

/// Singular or ill-conditioned numerical data.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double condition_estimate = 0.0)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace polydisk

namespace polydisk {

/// A randomized decision procedure ran out of rounds without a verdict.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace polydisk
