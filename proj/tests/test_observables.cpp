#include <doctest.h>

#include <cmath>

#include "fvd/errors.hpp"
#include "fvd/evolve.hpp"
#include "fvd/model.hpp"
#include "fvd/observables.hpp"
#include "oracles.hpp"

using namespace fvd;

namespace {

/// Hand-enumerated projector count: number of start sites whose length-L
/// pattern (flipped ordering inside, Neel ordering on the brackets) matches
/// the configuration. Written with plain site loops, independently of the
/// production bit tricks.
int naive_domain_hits(std::uint64_t bits, int n, int length) {
  auto fv_bit = [](int site) { return site % 2 == 1 ? 1 : 0; };
  int count = 0;
  for (int s = 0; s < n; ++s) {
    bool ok = true;
    for (int d = 0; d < length && ok; ++d) {
      const int site = (s + d) % n;
      ok = (((bits >> site) & 1) == static_cast<std::uint64_t>(1 - fv_bit(site)));
    }
    const int left = (s - 1 + n) % n;
    const int right = (s + length) % n;
    ok = ok && (((bits >> left) & 1) == static_cast<std::uint64_t>(fv_bit(left)));
    ok = ok && (((bits >> right) & 1) == static_cast<std::uint64_t>(fv_bit(right)));
    if (ok) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("staggered order on the reference states") {
  CHECK(m_afm(StateVector::neel(8)) == doctest::Approx(1.0));
  CHECK(m_afm(StateVector::neel_prime(8)) == doctest::Approx(-1.0));

  StateVector uniform(8);
  const double a = 1.0 / std::sqrt(256.0);
  for (auto& amp : uniform.amp) amp = a;
  CHECK(m_afm(uniform) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rescaling endpoints and errors") {
  const std::vector<std::pair<double, double>> flat{{0.0, 0.8}, {1.0, 0.8}, {2.0, 0.8}};
  for (const auto& [t, y] : rescale_series(flat)) CHECK(y == doctest::Approx(1.0));

  const std::vector<std::pair<double, double>> converted{{0.0, 0.8}, {1.0, -0.8}};
  CHECK(rescale_series(converted)[1].second == doctest::Approx(0.0));

  CHECK_THROWS_AS(rescale_series({}), DomainError);
  CHECK_THROWS_AS(rescale_series({{0.0, 0.0}, {1.0, 0.5}}), DomainError);
}

TEST_CASE("domain densities on product states") {
  const int n = 10;
  CHECK(filling_factor(StateVector::neel(n)) == 0.0);
  for (int len = 1; len <= n - 1; ++len) {
    CHECK(bubble_density(StateVector::neel(n), len) == 0.0);
    CHECK(bubble_density(StateVector::neel_prime(n), len) == 0.0);
  }

  // one flipped site is a length-1 domain wherever it sits
  for (int site = 0; site < n; ++site) {
    StateVector flipped = StateVector::basis(n, neel_bits(n) ^ (1ull << site));
    CHECK(bubble_density(flipped, 1) == doctest::Approx(1.0 / n));
    for (int len = 2; len <= n - 1; ++len) CHECK(bubble_density(flipped, len) == 0.0);
  }

  // an isolated length-2 domain contributes 3/N to the filling factor
  StateVector two = StateVector::basis(n, neel_bits(n) ^ 0b1100ull);
  CHECK(bubble_density(two, 2) == doctest::Approx(1.0 / n));
  CHECK(filling_factor(two) == doctest::Approx(3.0 / n));

  CHECK_THROWS_AS(bubble_density(StateVector::neel(n), 0), DomainError);
  CHECK_THROWS_AS(bubble_density(StateVector::neel(n), n), DomainError);
}

TEST_CASE("projector route equals the run-decomposition route") {
  const int n = 8;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const StateVector psi = oracles::random_state(n, seed);
    const std::vector<double> runs = all_bubble_densities(psi);
    for (int len = 1; len <= n - 1; ++len) {
      CHECK(bubble_density(psi, len) == doctest::Approx(runs[len - 1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("densities agree with hand-enumerated projectors on every configuration") {
  const int n = 10;
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    const StateVector basis = StateVector::basis(n, bits);
    const std::vector<double> sigma = all_bubble_densities(basis);
    double rho_expected = 0.0;
    int tv_sites = 0, bubbles = 0;
    for (int len = 1; len <= n - 1; ++len) {
      const int hits = naive_domain_hits(bits, n, len);
      CHECK(sigma[len - 1] == doctest::Approx(static_cast<double>(hits) / n));
      rho_expected += (len + 1.0) * hits / n;
      tv_sites += len * hits;
      bubbles += hits;
    }
    CHECK(filling_factor(basis) == doctest::Approx(rho_expected).epsilon(1e-12));
    CHECK(filling_factor(basis) ==
          doctest::Approx(static_cast<double>(tv_sites + bubbles) / n).epsilon(1e-12));
  }
}

TEST_CASE("densities are invariant under rotation by one unit cell") {
  const int n = 8;
  const StateVector psi = oracles::random_state(n, 77);
  StateVector rotated(n);
  for (std::uint64_t k = 0; k < psi.dim(); ++k) {
    const std::uint64_t r = ((k << 2) | (k >> (n - 2))) & ((1ull << n) - 1);
    rotated.amp[r] = psi.amp[k];
  }
  const auto a = all_bubble_densities(psi);
  const auto b = all_bubble_densities(rotated);
  for (int len = 1; len <= n - 1; ++len)
    CHECK(a[len - 1] == doctest::Approx(b[len - 1]).epsilon(1e-12));
}

TEST_CASE("overlapping same-length projectors exclude each other") {
  // starts closer than their pattern span impose conflicting site values, so
  // no configuration can satisfy two of them; disjoint domains count once each
  const int n = 8;
  auto start_matches = [&](std::uint64_t bits, int s, int len) {
    auto fv_bit = [](int site) { return site % 2 == 1 ? 1 : 0; };
    for (int d = 0; d < len; ++d) {
      const int site = (s + d) % n;
      if (((bits >> site) & 1) != static_cast<std::uint64_t>(1 - fv_bit(site))) return false;
    }
    const int left = (s - 1 + n) % n, right = (s + len) % n;
    return ((bits >> left) & 1) == static_cast<std::uint64_t>(fv_bit(left)) &&
           ((bits >> right) & 1) == static_cast<std::uint64_t>(fv_bit(right));
  };
  for (const int len : {1, 2, 3}) {
    for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
      for (int s = 0; s < n; ++s) {
        for (int offset = 1; offset <= len; ++offset) {
          const int s2 = (s + offset) % n;
          CHECK_FALSE((start_matches(bits, s, len) && start_matches(bits, s2, len)));
        }
      }
    }
  }
  // two domains separated by intact background both count
  StateVector two_bubbles = StateVector::basis(12, neel_bits(12) ^ 0b000011001100ull);
  CHECK(bubble_density(two_bubbles, 2) == doctest::Approx(2.0 / 12.0));
  CHECK(naive_domain_hits(neel_bits(8) ^ 0b0110ull, 8, 2) == 1);
}

TEST_CASE("densities equal the explicit projector-string operators") {
  // Sigma_1..Sigma_3 written out as sums of occupation / vacancy strings over
  // the two sublattice parity classes, evaluated through the operator algebra
  const int n = 8;
  auto occupation = [&](int site) { return OperatorSum::occupation(n, ((site % n) + n) % n); };
  auto vacancy = [&](int site) {
    OperatorSum g = OperatorSum::identity(n);
    g -= OperatorSum::occupation(n, ((site % n) + n) % n);
    return g;
  };
  // the ordered reference has the odd code sublattice occupied, so domains
  // starting on an odd site read n n (g) ... and even starts read g g (n) ...
  auto sigma_op = [&](int length) {
    OperatorSum sum(n);
    for (int i = 0; i < n; ++i) {
      OperatorSum term = OperatorSum::identity(n, 1.0 / n);
      for (int d = -1; d <= length; ++d) {
        const int site = i + d;
        const bool fv_occupied = (((site % n) + n) % n) % 2 == 1;
        const bool inside = d >= 0 && d < length;
        // inside the domain the pattern is flipped, on the brackets it is not
        term = term * ((fv_occupied != inside) ? occupation(site) : vacancy(site));
      }
      sum += term;
    }
    return sum;
  };

  for (std::uint64_t seed : {11u, 12u}) {
    const StateVector psi = oracles::random_state(n, seed);
    for (int length : {1, 2, 3}) {
      const double from_operator = expectation(sigma_op(length), psi).real();
      CHECK(bubble_density(psi, length) ==
            doctest::Approx(from_operator).epsilon(1e-10));
    }
  }
}

TEST_CASE("measurement sampling") {
  SUBCASE("a product state always measures itself") {
    const auto shots = sample_bitstrings(StateVector::neel(8), 50, std::nullopt, 3);
    for (const auto& b : shots) CHECK(b.bits == neel_bits(8));
  }

  SUBCASE("empirical frequencies match the amplitudes") {
    StateVector psi(4);
    psi.amp[0b0000] = 0.5;
    psi.amp[0b1010] = 0.5;
    psi.amp[0b0101] = std::sqrt(0.3);
    psi.amp[0b1111] = std::sqrt(0.2);
    const int shots = 100000;
    const auto draws = sample_bitstrings(psi, shots, std::nullopt, 99);
    std::vector<int> counts(16, 0);
    for (const auto& b : draws) counts[b.bits]++;
    for (std::uint64_t k = 0; k < 16; ++k) {
      const double p = std::norm(psi.amp[k]);
      const double bound = 4.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / shots);
      CHECK(std::abs(static_cast<double>(counts[k]) / shots - p) < bound + 1e-9);
    }
  }

  SUBCASE("sampled order matches the exact expectation within 5/sqrt(shots)") {
    const HamiltonianSpec spec{8, 1.8, 4.8, 0.48, 6.0, Interaction::PowerLaw6,
                               DistanceMode::RingSeparation};
    const auto res = evolve(StateVector::neel(8), spec,
                            Schedule::constant(1.8, 4.8, 0.48, 0.2),
                            std::vector<double>{0.2});
    const StateVector& psi = res.states[0];
    const double exact = m_afm(psi);
    const int shots = 40000;
    const auto draws = sample_bitstrings(psi, shots, std::nullopt, 11);
    double est = 0.0;
    for (const auto& b : draws) est += m_afm_of_bits(b);
    est /= shots;
    CHECK(std::abs(est - exact) < 5.0 / std::sqrt(static_cast<double>(shots)));
  }

  SUBCASE("readout errors rescale the staggered order by 1 - p1 - p2") {
    const HamiltonianSpec spec{8, 1.8, 4.8, 0.48, 6.0, Interaction::PowerLaw6,
                               DistanceMode::RingSeparation};
    const auto res = evolve(StateVector::neel(8), spec,
                            Schedule::constant(1.8, 4.8, 0.48, 0.15),
                            std::vector<double>{0.15});
    const StateVector& psi = res.states[0];
    const SpamModel spam;
    const int shots = 100000;
    const auto draws = sample_bitstrings(psi, shots, spam, 17);
    double est = 0.0, var = 0.0;
    std::vector<double> vals;
    vals.reserve(shots);
    for (const auto& b : draws) vals.push_back(m_afm_of_bits(b));
    for (double v : vals) est += v;
    est /= shots;
    for (double v : vals) var += (v - est) * (v - est);
    const double se = std::sqrt(var / shots / (shots - 1.0));
    const double expected = (1.0 - spam.p1 - spam.p2) * m_afm(psi);
    CHECK(std::abs(est - expected) < 5.0 * se);
  }

  CHECK_THROWS_AS(sample_bitstrings(StateVector::neel(4), 0, std::nullopt, 1), DomainError);
  SpamModel bad;
  bad.p1 = 0.6;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("landscape projection sums to one and localizes product states") {
  HamiltonianSpec spec;
  spec.n_sites = 8;
  spec.omega_mhz = 0.0;
  spec.delta_g_mhz = 6.0;
  spec.delta_l_mhz = 3.0;
  spec.v_nn_mhz = 6.0;
  spec.interaction = Interaction::NearestNeighbor;

  const BitConfig reference{8, neel_bits(8)};
  const auto manifolds = landscape(spec, reference);
  const auto proj = landscape_projection(StateVector::neel(8), manifolds);

  double total = 0.0;
  for (const auto& p : proj) {
    total += p.probability;
    if (p.hamming_distance == 0) CHECK(p.probability == doctest::Approx(1.0));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sample flattening round-trips") {
  const StateVector psi = oracles::random_state(6, 5);
  const ObservableSample direct = sample_observables(psi);
  const ObservableSample round = unflatten_observables(6, flatten_observables(psi));
  CHECK(direct.m_afm == round.m_afm);
  CHECK(direct.rho == round.rho);
  CHECK(direct.sx_total == round.sx_total);
  for (int ell = 1; ell <= 5; ++ell) CHECK(direct.sigma_l.at(ell) == round.sigma_l.at(ell));
  for (int j = 0; j < 6; ++j) CHECK(direct.site_sz[j] == round.site_sz[j]);
}
