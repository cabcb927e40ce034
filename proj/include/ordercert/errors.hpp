#pragma once

#include <stdexcept>
#include <string>

namespace ordercert {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands claim different groups.
class OwnerMismatch : public Error {
 public:
  using Error::Error;
};

/// A desk-scale cap (ball size, closure size, search nodes) was hit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An operation's documented precondition does not hold.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Malformed group spec, element text, or certificate.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordercert
