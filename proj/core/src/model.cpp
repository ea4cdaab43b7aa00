#include "fvd/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "fvd/errors.hpp"

namespace fvd {

void HamiltonianSpec::validate() const {
  if (n_sites < 4) throw DomainError("n_sites must be >= 4");
  if (n_sites % 2 != 0) throw DomainError("n_sites must be even (staggering requires it)");
  if (n_sites > 24) throw DomainError("n_sites above the full-state-vector cap of 24");
  if (!(v_nn_mhz > 0.0)) throw DomainError("v_nn must be positive (antiferromagnetic)");
}

HamiltonianSpec HamiltonianSpec::with_params(double omega, double delta_g,
                                             double delta_l) const {
  HamiltonianSpec s = *this;
  s.omega_mhz = omega;
  s.delta_g_mhz = delta_g;
  s.delta_l_mhz = delta_l;
  return s;
}

double site_distance(const HamiltonianSpec& spec, int i, int j) {
  const int n = spec.n_sites;
  const int sep = std::abs(i - j);
  const int ring = std::min(sep, n - sep);
  if (spec.distance_mode == DistanceMode::RingSeparation) return static_cast<double>(ring);
  // chord of the regular N-gon, rescaled so adjacent sites are 1 apart
  return std::sin(M_PI * ring / n) / std::sin(M_PI / n);
}

double coupling_mhz(const HamiltonianSpec& spec, int i, int j) {
  if (i == j) return 0.0;
  const int n = spec.n_sites;
  const int sep = std::abs(i - j);
  const int ring = std::min(sep, n - sep);
  if (spec.interaction == Interaction::NearestNeighbor) {
    return ring == 1 ? spec.v_nn_mhz : 0.0;
  }
  const double d = site_distance(spec, i, j);
  return spec.v_nn_mhz / std::pow(d, 6);
}

OperatorSum build_hamiltonian(const HamiltonianSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  OperatorSum h(n);
  for (int j = 0; j < n; ++j) {
    h += OperatorSum::single(n, j, Pauli::X, angular(spec.omega_mhz) / 2.0);
    const double detuning = -spec.delta_g_mhz + stagger_sign(j) * spec.delta_l_mhz;
    h += OperatorSum::occupation(n, j, angular(detuning));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = coupling_mhz(spec, i, j);
      if (v == 0.0) continue;
      h += OperatorSum::occupation(n, i) * OperatorSum::occupation(n, j) * angular(v);
    }
  }
  return h;
}

OperatorSum build_afm_order(int n_sites) {
  OperatorSum m(n_sites);
  for (int j = 0; j < n_sites; ++j)
    m += OperatorSum::single(n_sites, j, Pauli::Z, stagger_sign(j) / n_sites);
  return m;
}

OperatorSum build_total_sx(int n_sites) {
  OperatorSum sx(n_sites);
  for (int j = 0; j < n_sites; ++j) sx += OperatorSum::single(n_sites, j, Pauli::X);
  return sx;
}

double classical_energy(const HamiltonianSpec& spec, const BitConfig& config) {
  spec.validate();
  if (config.n_sites != spec.n_sites)
    throw DimensionError("classical_energy: configuration size mismatch");
  const int n = spec.n_sites;
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!((config.bits >> j) & 1)) continue;
    e += -spec.delta_g_mhz + stagger_sign(j) * spec.delta_l_mhz;
    for (int i = 0; i < j; ++i)
      if ((config.bits >> i) & 1) e += coupling_mhz(spec, i, j);
  }
  return angular(e);
}

std::vector<double> classical_energy_table(const HamiltonianSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const std::size_t dim = std::size_t{1} << n;
  // single-site energies and pair couplings folded with one pass per site
  std::vector<double> table(dim, 0.0);
  for (int j = 0; j < n; ++j) {
    const double on_site = -spec.delta_g_mhz + stagger_sign(j) * spec.delta_l_mhz;
    const std::uint64_t bj = 1ull << j;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(k & bj)) continue;
      double e = on_site;
      for (int i = 0; i < j; ++i)
        if (k & (1ull << i)) e += coupling_mhz(spec, i, j);
      table[k] += e;
    }
  }
  for (double& e : table) e *= kTwoPi;
  return table;
}

TfimParams tfim_params(const HamiltonianSpec& spec) {
  spec.validate();
  if (spec.interaction != Interaction::NearestNeighbor)
    throw DomainError("Ising-chain mapping requires nearest-neighbor interactions");
  if (std::abs(spec.delta_g_mhz - spec.v_nn_mhz) > 1e-12 * spec.v_nn_mhz)
    throw DomainError("Ising-chain mapping requires delta_g == v_nn");
  return TfimParams{2.0 * spec.omega_mhz / spec.v_nn_mhz, 2.0 * spec.delta_l_mhz / spec.v_nn_mhz};
}

OperatorSum build_tfim(int n_sites, const TfimParams& params) {
  OperatorSum h(n_sites);
  for (int j = 0; j < n_sites; ++j) {
    const int jp = (j + 1) % n_sites;
    OperatorSum zz = OperatorSum::single(n_sites, j, Pauli::Z) *
                     OperatorSum::single(n_sites, jp, Pauli::Z);
    h -= zz;
    h += OperatorSum::single(n_sites, j, Pauli::X, -params.h_x);
    h += OperatorSum::single(n_sites, j, Pauli::Z, -params.h_z);
  }
  return h;
}

double bubble_resonance_ratio(int bubble_length) {
  if (bubble_length < 1) throw DomainError("bubble length must be >= 1");
  return static_cast<double>(bubble_length);
}

std::vector<LandscapeManifold> landscape(const HamiltonianSpec& spec,
                                         const BitConfig& reference) {
  spec.validate();
  if (reference.n_sites != spec.n_sites)
    throw DimensionError("landscape: reference size mismatch");
  if (spec.n_sites > kLandscapeMaxSites)
    throw DomainError("landscape: n_sites above the full-enumeration cap");

  const std::vector<double> energy = classical_energy_table(spec);
  const double e_ref = energy[reference.bits];
  const double scale = angular(spec.v_nn_mhz);

  // group by (distance, energy) with energies snapped at relative 1e-9
  std::map<std::pair<int, std::int64_t>, LandscapeManifold> groups;
  for (std::size_t k = 0; k < energy.size(); ++k) {
    const int dist = std::popcount(k ^ reference.bits);
    const double rel = (energy[k] - e_ref) / scale;
    const auto snapped = static_cast<std::int64_t>(std::llround(rel * 1e9));
    auto& g = groups[{dist, snapped}];
    if (g.configs.empty()) {
      g.hamming_distance = dist;
      g.energy_over_v = rel;
    }
    g.configs.push_back(k);
  }

  std::vector<LandscapeManifold> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace fvd
