#pragma once

#include <stdexcept>
#include <string>

namespace betagap {

/// Input outside the mathematical domain of an operation (bad beta, n, eps...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or met a degenerate configuration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// det(cos t Q1 + sin t Q2) vanishes identically in t.
class DegeneratePencilError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace betagap
