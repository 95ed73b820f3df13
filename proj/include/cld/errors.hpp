#pragma once

#include <stdexcept>
#include <string>

namespace cld {

// Evaluation outside the operation's domain (coordinates, stencils, targets).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation asked of a family that does not support it.
struct UnsupportedFamilyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined result (zero density, vanishing denominator).
struct UndefinedValueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative procedure exhausted its budget; carries the last residual.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, double residual_, int iterations_)
      : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
  double residual;
  int iterations;
};

// A 2x2 block update with no admissible root; identifies the block.
struct BlockSolveError : std::runtime_error {
  BlockSolveError(const std::string& msg, int i_, int j_)
      : std::runtime_error(msg), i(i_), j(j_) {}
  int i;
  int j;
};

}  // namespace cld
