#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fvd/model.hpp"
#include "fvd/state.hpp"

namespace fvd {

/// Staggered magnetization, +1 on the Neel (false-vacuum) state and -1 on
/// the opposite ordering.
double m_afm(const StateVector& state);
double m_afm_of_bits(const BitConfig& config);

/// m_res(t) = (m(t) + m(0)) / (2 m(0)); 1 at t = 0 by construction, 0 at
/// full conversion to the opposite ordering.
std::vector<std::pair<double, double>> rescale_series(
    const std::vector<std::pair<double, double>>& series);
double rescale_value(double m, double m0);

/// Density of true-vacuum domains of exact length L: the mean number per
/// site of maximal runs of L consecutive sites in the flipped ordering,
/// bracketed on both sides by sites still in the false-vacuum pattern.
/// Computed by projector bit-masks, one O(2^N) pass per start site.
/// L runs from 1 to N-1 (at N-1 the two boundary sites coincide).
double bubble_density(const StateVector& state, int length);

/// All lengths at once by maximal-run decomposition of each basis word;
/// index ell of the result is the density of length-(ell+1) domains.
std::vector<double> all_bubble_densities(const StateVector& state);

/// rho = sum_L (L+1) <Sigma_L>: fraction of the ring inside or bounding a
/// true-vacuum domain; approaches 1 in the high-bubble-density regime.
double filling_factor(const StateVector& state);
std::vector<double> bubble_counts_of_bits(const BitConfig& config);

/// Readout misclassification: p1 = up read as down, p2 = down read as up.
/// The staggered order only picks up the factor (1 - p1 - p2) from these.
struct SpamModel {
  double p1 = 0.04;
  double p2 = 0.015;
  void validate() const;
};

/// Projective measurements drawn from |psi|^2, then corrupted bit-by-bit by
/// the SPAM flips. Deterministic for a fixed seed.
std::vector<BitConfig> sample_bitstrings(const StateVector& state, int shots,
                                         const std::optional<SpamModel>& spam,
                                         std::uint64_t rng_seed);

struct ProjectedManifold {
  int hamming_distance = 0;
  double energy_over_v = 0.0;
  double probability = 0.0;
};

/// |amplitude|^2 summed over each landscape manifold; probabilities sum to 1.
std::vector<ProjectedManifold> landscape_projection(
    const StateVector& state, const std::vector<LandscapeManifold>& manifolds);

/// Everything measured at one sample time. sigma_l holds lengths 1..N-1;
/// m_afm_rescaled refers to the series reference m(0).
struct ObservableSample {
  double time_us = 0.0;
  double m_afm = 0.0;
  double m_afm_rescaled = 0.0;
  std::map<int, double> sigma_l;
  double rho = 0.0;
  double sx_total = 0.0;
  std::vector<double> site_sz;
};

ObservableSample sample_observables(const StateVector& state);

/// Flat layout used by the trajectory engine:
/// [m_afm, sx_total, rho, sigma_1..sigma_{N-1}, sz_0..sz_{N-1}].
std::vector<double> flatten_observables(const StateVector& state);
ObservableSample unflatten_observables(int n_sites, const std::vector<double>& row);

/// Sampled observables along one run, with trajectory standard errors when
/// the run averaged more than one trajectory.
struct TimeSeries {
  std::vector<ObservableSample> samples;
  std::vector<ObservableSample> stderrs;
  int trajectory_count = 1;
  double reference_m0 = 1.0;

  std::vector<std::pair<double, double>> rescaled_series() const;
};

/// Fills m_afm_rescaled (and the stored reference) from the first sample.
void apply_rescaling(TimeSeries& series);

}  // namespace fvd
