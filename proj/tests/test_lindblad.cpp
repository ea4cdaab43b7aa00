#include <doctest.h>

#include <cmath>

#include "fvd/bch.hpp"
#include "fvd/errors.hpp"
#include "fvd/evolve.hpp"
#include "fvd/liouvillian.hpp"
#include "fvd/model.hpp"
#include "fvd/observables.hpp"
#include "oracles.hpp"

using namespace fvd;

namespace {

HamiltonianSpec small_spec(double omega = 1.8) {
  HamiltonianSpec s;
  s.n_sites = 4;
  s.omega_mhz = omega;
  s.delta_g_mhz = 4.8;
  s.delta_l_mhz = 0.48;
  s.v_nn_mhz = 6.0;
  s.interaction = Interaction::PowerLaw6;
  return s;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
  return out;
}

}  // namespace

TEST_CASE("vanishing rates reproduce the unitary evolution") {
  const HamiltonianSpec spec = small_spec();
  const Schedule sched =
      Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, spec.delta_l_mhz, 0.5);
  const auto times = linspace(0.1, 0.5, 3);

  const auto dm = liouvillian_reference(StateVector::neel(4), spec, sched, times, std::nullopt);
  const auto uni = evolve(StateVector::neel(4), spec, sched, times);
  const OperatorSum m = build_afm_order(4);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double from_rho = expectation(m, dm.rhos[i]).real();
    const double from_psi = real_expectation(m, uni.states[i].normalized_copy());
    CHECK(std::abs(from_rho - from_psi) < 1e-7);
  }
}

TEST_CASE("population decay at the longitudinal rate") {
  HamiltonianSpec spec = small_spec(0.0);
  NoiseModel noise;
  noise.t1_us = 7.0;
  noise.t2_star_us = 1e9;  // dephasing off
  const auto times = linspace(0.5, 6.0, 6);
  const auto dm = liouvillian_reference(StateVector::neel(4), spec,
                                        Schedule::constant(0.0, spec.delta_g_mhz,
                                                           spec.delta_l_mhz, 6.0),
                                        times, noise);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (int j = 0; j < 4; ++j) {
      const double n_j = expectation(OperatorSum::occupation(4, j), dm.rhos[i]).real();
      const double expected = ((neel_bits(4) >> j) & 1) ? std::exp(-times[i] / noise.t1_us) : 0.0;
      CHECK(n_j == doctest::Approx(expected).epsilon(1e-7));
    }
  }
}

TEST_CASE("coherence decay at twice the dephasing rate") {
  HamiltonianSpec spec = small_spec(0.0);
  NoiseModel noise;
  noise.t1_us = 1e9;  // decay off
  noise.t2_star_us = 2.5;

  // superposition on site 0, everything else down: a single coherence
  StateVector initial(4);
  initial.amp[0] = 1.0 / std::sqrt(2.0);
  initial.amp[1] = 1.0 / std::sqrt(2.0);

  const auto times = linspace(0.5, 4.0, 4);
  const auto dm = liouvillian_reference(initial, spec,
                                        Schedule::constant(0.0, spec.delta_g_mhz,
                                                           spec.delta_l_mhz, 4.0),
                                        times, noise);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex coherence = dm.rhos[i](0, 1);  // <sigma^+_0> up to a phase
    const double expected = 0.5 * std::exp(-2.0 * noise.gamma2() * times[i]);
    CHECK(std::abs(coherence) == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("density-matrix cap") {
  HamiltonianSpec spec = small_spec();
  spec.n_sites = 8;
  CHECK_THROWS_AS(liouvillian_reference(StateVector::neel(8), spec,
                                        Schedule::constant(1.0, 1.0, 0.1, 1.0),
                                        std::vector<double>{0.5}, std::nullopt),
                  DomainError);
}

TEST_CASE("trajectory means track the master equation") {
  const HamiltonianSpec spec = small_spec();
  NoiseModel noise;  // benchmark rates: T1 = 28 us, T2* = 3.8 us
  const Schedule sched =
      Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, spec.delta_l_mhz, 2.0);
  const auto times = linspace(0.2, 2.0, 10);

  EvolveOptions opts;
  opts.noise = noise;
  opts.trajectories = 800;
  opts.rng_seed = 20240817;
  opts.sampler = [](const StateVector& s) { return std::vector<double>{m_afm(s)}; };
  const auto traj = evolve(StateVector::neel(4), spec, sched, times, opts);

  const auto dm = liouvillian_reference(StateVector::neel(4), spec, sched, times, noise);
  const OperatorSum m = build_afm_order(4);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double exact = expectation(m, dm.rhos[i]).real();
    const double mean = traj.observable_mean[i][0];
    const double se = traj.observable_se[i][0];
    CHECK(std::abs(mean - exact) < 3.0 * se);
    CHECK(se > 0.0);
    CHECK(se < 0.05);
  }
}

TEST_CASE("trajectory error shrinks as the inverse square root of the count") {
  const HamiltonianSpec spec = small_spec();
  NoiseModel noise;
  noise.t1_us = 5.0;  // fast rates so jumps dominate
  noise.t2_star_us = 2.0;
  const Schedule sched =
      Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, spec.delta_l_mhz, 1.0);
  const std::vector<double> times{1.0};

  const auto dm = liouvillian_reference(StateVector::neel(4), spec, sched, times, noise);
  const double exact = expectation(build_afm_order(4), dm.rhos[0]).real();

  std::vector<double> log_counts, log_errors;
  for (const int count : {64, 256, 1024}) {
    double err_acc = 0.0;
    const int n_seeds = 12;
    for (int seed = 0; seed < n_seeds; ++seed) {
      EvolveOptions opts;
      opts.noise = noise;
      opts.trajectories = count;
      opts.rng_seed = 1000 + seed;
      opts.sampler = [](const StateVector& s) { return std::vector<double>{m_afm(s)}; };
      const auto traj = evolve(StateVector::neel(4), spec, sched, times, opts);
      err_acc += std::abs(traj.observable_mean[0][0] - exact);
    }
    log_counts.push_back(std::log(static_cast<double>(count)));
    log_errors.push_back(std::log(err_acc / n_seeds));
  }
  const double slope = (log_errors.back() - log_errors.front()) /
                       (log_counts.back() - log_counts.front());
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("trajectory runs are reproducible and need a sampler") {
  const HamiltonianSpec spec = small_spec();
  const Schedule sched = Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, 0.48, 0.5);
  EvolveOptions opts;
  opts.noise = NoiseModel{};
  opts.trajectories = 16;
  opts.rng_seed = 7;
  CHECK_THROWS_AS(
      evolve(StateVector::neel(4), spec, sched, std::vector<double>{0.5}, opts), DomainError);

  opts.sampler = [](const StateVector& s) { return std::vector<double>{m_afm(s)}; };
  const auto a = evolve(StateVector::neel(4), spec, sched, std::vector<double>{0.5}, opts);
  const auto b = evolve(StateVector::neel(4), spec, sched, std::vector<double>{0.5}, opts);
  CHECK(a.observable_mean[0][0] == b.observable_mean[0][0]);
}
