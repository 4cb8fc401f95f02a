#pragma once

#include <stdexcept>
#include <string>

namespace qid {

/// Raised when an expression violates index or parity bookkeeping.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for inputs outside the supported range of an operation.
class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a symbolic identity that must hold does not close.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qid
