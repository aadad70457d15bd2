#pragma once

#include <stdexcept>
#include <string>

namespace superconn {

/// Base class of every error raised by the kernel.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different charts, bundles, or index ranges.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// The homotopy parameter t reached an operation that does not accept it.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// A degree-homogeneous input was required.
class DegreeError : public Error {
public:
  using Error::Error;
};

/// A tensor violates its parity (total degree) constraint.
class ParityError : public Error {
public:
  using Error::Error;
};

/// A precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A result would contain theta monomials above the declared cap.
class BudgetError : public Error {
public:
  BudgetError(const std::string& what, int required_cap)
      : Error(what), required_cap_(required_cap) {}
  int required_cap() const noexcept { return required_cap_; }

private:
  int required_cap_;
};

/// An identity that holds by construction failed; signals a sign bug.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

}  // namespace superconn
