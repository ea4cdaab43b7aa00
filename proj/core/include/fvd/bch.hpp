#pragma once

#include <optional>
#include <vector>

#include "fvd/model.hpp"
#include "fvd/pauli.hpp"
#include "fvd/state.hpp"

namespace fvd {

/// One order of the short-time expansion of the staggered order under the
/// ring Hamiltonian: the nested commutator, its size, and its expectation
/// against the two initial states. Values are in angular units, (rad/us)^k.
struct NestedCommutatorReport {
  int order = 0;
  OperatorSum op;
  double expectation_neel = 0.0;
  double expectation_pqg = 0.0;
  std::size_t term_count = 0;
  /// Closed-form value where one exists for these parameters; the fourth
  /// order reference holds only for nearest-neighbor interactions at zero
  /// staggered field and is omitted otherwise.
  std::optional<double> analytic_neel;
  std::optional<double> analytic_pqg;
};

/// Expectation of a Hermitian-by-construction operator against a real state;
/// the imaginary part is checked against 1e-10 and discarded.
double real_expectation(const OperatorSum& op, const StateVector& state);

/// Reports for orders 0..max_order against the Neel state and the supplied
/// pre-quench ground state. delta_l_mhz is the post-quench staggered field
/// used both in the Hamiltonian and in the second-order reference.
std::vector<NestedCommutatorReport> bch_reports(const HamiltonianSpec& spec,
                                                const StateVector& pqg, int max_order,
                                                int order_cap = kDefaultMaxBchOrder);

/// Closed-form fourth-order value on the Neel state at delta_l = 0 with
/// nearest-neighbor interactions, in angular units.
double c4_neel_reference(const HamiltonianSpec& spec);

/// (1/pi) Int_0^pi (2W - V cos k)/sqrt(4W^2 + V^2 - 4WV cos k) dk at V = 1,
/// W = omega_over_v: the infinite-chain transverse magnetization density
/// entering the second-order Neel/ground-state ratio. Valid below the
/// critical point omega_over_v < 1/2. Absolute error <= 1e-10.
double tfim_c2_ratio_integral(double omega_over_v);

}  // namespace fvd
