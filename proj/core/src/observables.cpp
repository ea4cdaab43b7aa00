#include "fvd/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "fvd/errors.hpp"

namespace fvd {

namespace {

inline double basis_m_afm(std::uint64_t k, int n, std::uint64_t stag_mask,
                          std::uint64_t full_mask) {
  const int up_plus = std::popcount(k & stag_mask);
  const int up_minus = std::popcount(k & ~stag_mask & full_mask);
  return 2.0 * (up_plus - up_minus) / n;
}

/// Lengths of maximal runs of set bits on a ring of n bits, appended to out
/// as increments of out[len-1]. An all-set word has no bounded run.
void accumulate_ring_runs(std::uint64_t mask, int n, std::uint64_t full_mask,
                          double weight, std::vector<double>& out) {
  if (mask == 0 || mask == full_mask) return;
  // rotate so that bit 0 starts a run boundary (bit n-1 clear)
  int rot = 0;
  while ((mask >> ((n - 1 + rot) % n)) & 1) ++rot;
  int run = 0;
  for (int j = 0; j < n; ++j) {
    const int site = (j + rot) % n;
    if ((mask >> site) & 1) {
      ++run;
    } else if (run > 0) {
      out[run - 1] += weight;
      run = 0;
    }
  }
  if (run > 0) out[run - 1] += weight;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

double m_afm(const StateVector& state) {
  const int n = state.n_sites;
  const std::uint64_t stag = neel_bits(n);
  const std::uint64_t full = (std::size_t{1} << n) - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < state.dim(); ++k)
    acc += std::norm(state.amp[k]) * basis_m_afm(k, n, stag, full);
  return acc;
}

double m_afm_of_bits(const BitConfig& config) {
  const std::uint64_t full = (std::size_t{1} << config.n_sites) - 1;
  return basis_m_afm(config.bits, config.n_sites, neel_bits(config.n_sites), full);
}

double rescale_value(double m, double m0) { return (m + m0) / (2.0 * m0); }

std::vector<std::pair<double, double>> rescale_series(
    const std::vector<std::pair<double, double>>& series) {
  if (series.empty()) throw DomainError("rescale_series: empty series");
  const double m0 = series.front().second;
  if (m0 == 0.0) throw DomainError("rescale_series: degenerate reference m(0) = 0");
  std::vector<std::pair<double, double>> out;
  out.reserve(series.size());
  for (const auto& [t, m] : series) out.emplace_back(t, rescale_value(m, m0));
  return out;
}

double bubble_density(const StateVector& state, int length) {
  const int n = state.n_sites;
  if (n % 2 != 0) throw DomainError("bubble_density: n_sites must be even");
  if (length < 1 || length > n - 1)
    throw DomainError("bubble_density: length must lie in [1, n_sites-1]");
  const std::uint64_t fv = neel_bits(n);
  const std::uint64_t full = (std::size_t{1} << n) - 1;
  const std::uint64_t tv = full & ~fv;

  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    // flipped ordering on sites s..s+length-1, false-vacuum pattern on the
    // bracketing sites; on a ring the two brackets coincide at length n-1
    std::uint64_t mask = 0, want = 0;
    auto require = [&](int site, std::uint64_t pattern) {
      const int j = ((site % n) + n) % n;
      mask |= 1ull << j;
      want |= pattern & (1ull << j);
    };
    require(s - 1, fv);
    for (int d = 0; d < length; ++d) require(s + d, tv);
    require(s + length, fv);

    for (std::size_t k = 0; k < state.dim(); ++k)
      if ((k & mask) == want) acc += std::norm(state.amp[k]);
  }
  return acc / n;
}

std::vector<double> all_bubble_densities(const StateVector& state) {
  const int n = state.n_sites;
  if (n % 2 != 0) throw DomainError("all_bubble_densities: n_sites must be even");
  const std::uint64_t fv = neel_bits(n);
  const std::uint64_t full = (std::size_t{1} << n) - 1;
  std::vector<double> counts(n - 1, 0.0);
  for (std::size_t k = 0; k < state.dim(); ++k) {
    const double p = std::norm(state.amp[k]);
    if (p == 0.0) continue;
    const std::uint64_t tv_match = (k ^ fv) & full;  // sites in the flipped ordering
    accumulate_ring_runs(tv_match, n, full, p, counts);
  }
  for (double& c : counts) c /= n;
  return counts;
}

std::vector<double> bubble_counts_of_bits(const BitConfig& config) {
  const int n = config.n_sites;
  const std::uint64_t full = (std::size_t{1} << n) - 1;
  std::vector<double> counts(n - 1, 0.0);
  accumulate_ring_runs((config.bits ^ neel_bits(n)) & full, n, full, 1.0, counts);
  return counts;
}

double filling_factor(const StateVector& state) {
  const std::vector<double> sigma = all_bubble_densities(state);
  double rho = 0.0;
  for (std::size_t ell = 0; ell < sigma.size(); ++ell)
    rho += (static_cast<double>(ell) + 2.0) * sigma[ell];  // (L + 1), L = ell + 1
  return rho;
}

void SpamModel::validate() const {
  if (p1 < 0.0 || p1 >= 0.5 || p2 < 0.0 || p2 >= 0.5)
    throw DomainError("SpamModel: probabilities must lie in [0, 0.5)");
}

std::vector<BitConfig> sample_bitstrings(const StateVector& state, int shots,
                                         const std::optional<SpamModel>& spam,
                                         std::uint64_t rng_seed) {
  if (shots < 1) throw DomainError("sample_bitstrings: shots must be >= 1");
  if (spam) spam->validate();
  const int n = state.n_sites;

  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  for (std::size_t k = 0; k < state.dim(); ++k) {
    acc += std::norm(state.amp[k]);
    cdf[k] = acc;
  }

  std::mt19937_64 rng(splitmix64(rng_seed));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<BitConfig> out;
  out.reserve(shots);
  for (int s = 0; s < shots; ++s) {
    const double u = uni(rng) * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t bits =
        std::min<std::uint64_t>(it - cdf.begin(), state.dim() - 1);  // guard the top edge
    if (spam) {
      for (int j = 0; j < n; ++j) {
        const double flip = uni(rng);
        const std::uint64_t bit = 1ull << j;
        if (bits & bit) {
          if (flip < spam->p1) bits &= ~bit;
        } else {
          if (flip < spam->p2) bits |= bit;
        }
      }
    }
    out.push_back(BitConfig{n, bits});
  }
  return out;
}

std::vector<ProjectedManifold> landscape_projection(
    const StateVector& state, const std::vector<LandscapeManifold>& manifolds) {
  std::vector<ProjectedManifold> out;
  out.reserve(manifolds.size());
  std::size_t covered = 0;
  for (const auto& m : manifolds) {
    double p = 0.0;
    for (std::uint64_t k : m.configs) {
      if (k >= state.dim()) throw DimensionError("landscape_projection: size mismatch");
      p += std::norm(state.amp[k]);
    }
    covered += m.configs.size();
    out.push_back(ProjectedManifold{m.hamming_distance, m.energy_over_v, p});
  }
  if (covered != state.dim())
    throw DimensionError("landscape_projection: manifolds do not cover the basis");
  return out;
}

ObservableSample sample_observables(const StateVector& state) {
  ObservableSample s;
  const int n = state.n_sites;
  s.m_afm = m_afm(state);
  const std::vector<double> sigma = all_bubble_densities(state);
  for (int ell = 0; ell < n - 1; ++ell) s.sigma_l[ell + 1] = sigma[ell];
  s.rho = 0.0;
  for (int ell = 0; ell < n - 1; ++ell) s.rho += (ell + 2.0) * sigma[ell];

  double sx = 0.0;
  std::vector<double> sz(n, 0.0);
  for (std::size_t k = 0; k < state.dim(); ++k) {
    const double p = std::norm(state.amp[k]);
    for (int j = 0; j < n; ++j) sz[j] += p * (((k >> j) & 1) ? 1.0 : -1.0);
  }
  for (int j = 0; j < n; ++j) {
    const std::uint64_t bit = 1ull << j;
    Complex acc = 0.0;
    for (std::size_t k = 0; k < state.dim(); ++k)
      acc += std::conj(state.amp[k ^ bit]) * state.amp[k];
    sx += acc.real();
  }
  s.sx_total = sx;
  s.site_sz = std::move(sz);
  return s;
}

std::vector<double> flatten_observables(const StateVector& state) {
  const ObservableSample s = sample_observables(state);
  const int n = state.n_sites;
  std::vector<double> row;
  row.reserve(3 + (n - 1) + n);
  row.push_back(s.m_afm);
  row.push_back(s.sx_total);
  row.push_back(s.rho);
  for (int ell = 1; ell <= n - 1; ++ell) row.push_back(s.sigma_l.at(ell));
  for (double v : s.site_sz) row.push_back(v);
  return row;
}

ObservableSample unflatten_observables(int n_sites, const std::vector<double>& row) {
  const std::size_t expected = 3 + (n_sites - 1) + n_sites;
  if (row.size() != expected) throw DimensionError("unflatten_observables: row size mismatch");
  ObservableSample s;
  s.m_afm = row[0];
  s.sx_total = row[1];
  s.rho = row[2];
  for (int ell = 1; ell <= n_sites - 1; ++ell) s.sigma_l[ell] = row[2 + ell];
  s.site_sz.assign(row.begin() + 2 + n_sites, row.end());
  return s;
}

std::vector<std::pair<double, double>> TimeSeries::rescaled_series() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.emplace_back(s.time_us, s.m_afm_rescaled);
  return out;
}

void apply_rescaling(TimeSeries& series) {
  if (series.samples.empty()) throw DomainError("apply_rescaling: empty series");
  const double m0 = series.samples.front().m_afm;
  if (m0 == 0.0) throw DomainError("apply_rescaling: degenerate reference m(0) = 0");
  series.reference_m0 = m0;
  for (auto& s : series.samples) s.m_afm_rescaled = rescale_value(s.m_afm, m0);
  for (auto& e : series.stderrs) e.m_afm_rescaled = std::abs(e.m_afm / (2.0 * m0));
}

}  // namespace fvd
