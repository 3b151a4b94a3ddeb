#pragma once

#include <stdexcept>
#include <string>

namespace mkepler {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (wrong sizes, grades, ranges).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two operands live over different metrics or ambient dimensions.
class MetricMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A point is too close to the Dirac string (negative x_n axis) for the
/// local gauge to be evaluated.
class DiracStringError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An object failed a set-membership test (orbit elements, light-cone data,
/// Lorentz transforms). `invariant()` names the violated condition.
class MembershipError : public Error {
 public:
  MembershipError(std::string invariant, const std::string& what)
      : Error(what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mkepler
