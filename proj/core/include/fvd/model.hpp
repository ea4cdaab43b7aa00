#pragma once

#include <cstdint>
#include <vector>

#include "fvd/pauli.hpp"
#include "fvd/state.hpp"

namespace fvd {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Frequencies are entered as nu in MHz; operator coefficients carry the 2*pi
/// and are in rad/us. Times are in us throughout.
inline double angular(double nu_mhz) { return kTwoPi * nu_mhz; }

enum class Interaction { NearestNeighbor, PowerLaw6 };
enum class DistanceMode { RingSeparation, Chord };

/// Physical parameters of the ring Hamiltonian
///   H/hbar = (W/2) sum_j sx_j + sum_j [-Dg + (-1)^j Dl] n_j + sum_{i<j} V_ij n_i n_j
/// plus geometry and truncation switches. All couplings antiferromagnetic
/// (v_nn > 0); n_sites even so the staggering closes around the ring.
struct HamiltonianSpec {
  int n_sites = 12;
  double omega_mhz = 1.8;
  double delta_g_mhz = 4.8;
  double delta_l_mhz = 0.6;
  double v_nn_mhz = 6.0;
  Interaction interaction = Interaction::PowerLaw6;
  DistanceMode distance_mode = DistanceMode::RingSeparation;

  void validate() const;
  HamiltonianSpec with_params(double omega, double delta_g, double delta_l) const;
};

/// Site separation entering V_ij = V / d^6. RingSeparation counts lattice
/// steps around the ring; Chord uses the straight-line distance of a regular
/// polygon normalized so nearest neighbors sit at distance 1.
double site_distance(const HamiltonianSpec& spec, int i, int j);

/// Pair coupling V_ij in MHz. NearestNeighbor keeps only |i-j| = 1 on the ring.
double coupling_mhz(const HamiltonianSpec& spec, int i, int j);

/// H/hbar in rad/us as an OperatorSum; Hermitian by construction.
OperatorSum build_hamiltonian(const HamiltonianSpec& spec);

/// Staggered order parameter M = (1/N) sum_j eps_j sz_j with eps chosen so
/// that the Neel state scores +1.
OperatorSum build_afm_order(int n_sites);

/// sum_j sx_j.
OperatorSum build_total_sx(int n_sites);

/// Diagonal matrix element of the omega = 0 Hamiltonian on one configuration,
/// in rad/us.
double classical_energy(const HamiltonianSpec& spec, const BitConfig& config);

/// classical_energy for every configuration, indexed by occupation word.
std::vector<double> classical_energy_table(const HamiltonianSpec& spec);

/// Dimensionless transverse/longitudinal fields of the equivalent
/// ferromagnetic Ising chain; defined only for nearest-neighbor interactions
/// at delta_g == v_nn. The spectra relate by
///   eig(H) = (2*pi*V/4) * eig(H_f) - 2*pi*N*V/4.
struct TfimParams {
  double h_x = 0.0;
  double h_z = 0.0;
};

TfimParams tfim_params(const HamiltonianSpec& spec);

/// H_f = -sum_j [ sz_j sz_{j+1} + h_x sx_j + h_z sz_j ] on a ring
/// (dimensionless coefficients).
OperatorSum build_tfim(int n_sites, const TfimParams& params);

/// V/Dl at which a length-L true-vacuum bubble costs nothing in the standard
/// Ising limit: the bulk gain L*Dl cancels the wall cost V.
double bubble_resonance_ratio(int bubble_length);

/// One group of configurations with common (Hamming distance to the
/// reference, static energy relative to the reference in units of 2*pi*V).
struct LandscapeManifold {
  int hamming_distance = 0;
  double energy_over_v = 0.0;
  std::vector<std::uint64_t> configs;
};

inline constexpr int kLandscapeMaxSites = 20;

/// Partition of all 2^N configurations, sorted by distance then energy.
/// Energies are grouped with relative tolerance 1e-9; degeneracies that an
/// interaction tail splits beyond that show up as separate manifolds.
std::vector<LandscapeManifold> landscape(const HamiltonianSpec& spec, const BitConfig& reference);

}  // namespace fvd
