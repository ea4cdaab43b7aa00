#pragma once

#include <stdexcept>
#include <string>

namespace fvd {

/// Mismatched operator/state sizes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside its documented domain (ranges, caps, empty inputs).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Violated algebraic precondition (non-Hermitian operator, unnormalized state).
struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file failed schema validation.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fvd
