#pragma once

#include <optional>

#include "fvd/pauli.hpp"
#include "fvd/state.hpp"

namespace fvd {

struct GroundStateOptions {
  int max_basis = 60;       // Krylov vectors kept per restart cycle
  int max_restarts = 80;
  double rel_tol = 1e-9;    // residual below rel_tol * l1_coeff_norm(h)
  int max_sites = 20;       // full-state-vector cap
  std::uint64_t start_seed = 0x5eed5eedull;  // pseudo-random start when unseeded
};

struct GroundStateResult {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;     // ||H psi - E psi||
  int iterations = 0;        // total matrix applications
};

/// Lowest eigenpair of a Hermitian OperatorSum by restarted Lanczos with full
/// reorthogonalization inside each cycle. A seed configuration starts the
/// iteration from that basis state, which selects the symmetry-broken branch
/// near degeneracy.
GroundStateResult ground_state(const OperatorSum& h,
                               std::optional<BitConfig> seed_sector = std::nullopt,
                               const GroundStateOptions& opts = {});

}  // namespace fvd
