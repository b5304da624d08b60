#pragma once

#include <stdexcept>
#include <string>

namespace rdec {

// Input has the wrong dimensions for the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input violates a structural invariant (symmetry, independence, membership).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation applied to the wrong kind of system (e.g. real vs complexified).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of the operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unknown suite name.
class CatalogueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver hit a numerical limit and cannot certify an answer.
class IndeterminateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdec
