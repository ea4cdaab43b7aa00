#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "fvd/bch.hpp"
#include "fvd/errors.hpp"
#include "fvd/evolve.hpp"
#include "fvd/ground_state.hpp"
#include "fvd/model.hpp"
#include "fvd/observables.hpp"
#include "oracles.hpp"

using namespace fvd;

namespace {

HamiltonianSpec working_point(int n, Interaction inter = Interaction::PowerLaw6) {
  HamiltonianSpec s;
  s.n_sites = n;
  s.omega_mhz = 1.8;
  s.delta_g_mhz = 4.8;
  s.delta_l_mhz = 0.48;
  s.v_nn_mhz = 6.0;
  s.interaction = inter;
  return s;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
  return out;
}

}  // namespace

TEST_CASE("diagonal Hamiltonians have product ground states") {
  HamiltonianSpec spec = working_point(8, Interaction::NearestNeighbor);
  spec.omega_mhz = 0.0;
  spec.delta_g_mhz = 6.0;

  SUBCASE("positive staggering favors the opposite ordering") {
    const auto gs = ground_state(build_hamiltonian(spec));
    CHECK(std::norm(inner(StateVector::neel_prime(8), gs.state)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gs.energy ==
          doctest::Approx(classical_energy(spec, BitConfig{8, ~neel_bits(8) & 0xFFull})));
  }
  SUBCASE("negative staggering favors the Neel ordering") {
    spec.delta_l_mhz = -0.48;
    const auto gs = ground_state(build_hamiltonian(spec));
    CHECK(std::norm(inner(StateVector::neel(8), gs.state)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("ground state against dense diagonalization") {
  HamiltonianSpec spec = working_point(8);
  spec.delta_l_mhz = -0.001;
  const OperatorSum h = build_hamiltonian(spec);
  const auto gs = ground_state(h, BitConfig{8, neel_bits(8)});
  CHECK(gs.residual < 1e-9 * h.l1_coeff_norm());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracles::dense_sum(h));
  CHECK(gs.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-11));
  Eigen::VectorXcd dense_gs = es.eigenvectors().col(0);
  const double overlap = std::norm(dense_gs.dot(oracles::to_eigen(gs.state)));
  CHECK(overlap > 1.0 - 1e-9);

  // transverse magnetization of the pre-quench ground state: negative and
  // insensitive to the vanishing staggered field
  const double sx1 = real_expectation(build_total_sx(8), gs.state);
  CHECK(sx1 < 0.0);
  spec.delta_l_mhz = -0.002;
  const auto gs2 = ground_state(build_hamiltonian(spec), BitConfig{8, neel_bits(8)});
  const double sx2 = real_expectation(build_total_sx(8), gs2.state);
  CHECK(std::abs(sx1 - sx2) / std::abs(sx1) < 1e-2);
}

TEST_CASE("non-Hermitian input is rejected") {
  OperatorSum op(4);
  op.add(PauliString::single(4, 0, Pauli::X, Complex(0.0, 1.0)));
  CHECK_THROWS_AS(ground_state(op), AlgebraError);
}

TEST_CASE("pre-quench ground state preparation") {
  SUBCASE("classical limit returns the Neel state") {
    HamiltonianSpec spec = working_point(8, Interaction::NearestNeighbor);
    spec.omega_mhz = 0.0;
    spec.delta_g_mhz = 6.0;
    const StateVector pqg = prepare_pqg(spec);
    CHECK(std::norm(inner(StateVector::neel(8), pqg)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("order parameter is reduced but not destroyed at omega/V = 0.3") {
    // desk sizes: the exact ground keeps full order only once the limit
    // field outweighs the finite-size tunnel splitting, i.e. from N = 12 on
    const HamiltonianSpec spec = working_point(12);
    const StateVector pqg = prepare_pqg(spec);
    const double m = m_afm(pqg);
    CHECK(m > 0.5);
    CHECK(m < 1.0);
    CHECK(m == doctest::Approx(0.9041).epsilon(0.01));  // regression anchor
  }
  SUBCASE("sensitivity to the limit parameter is documented") {
    // halving the limit field leaves the drive matrix element (which sets the
    // early decay) unchanged; the order parameter still feels the residual
    // finite-size mixture of the two orderings at this size
    const HamiltonianSpec spec = working_point(12);
    const StateVector a = prepare_pqg(spec);
    const HamiltonianSpec half =
        spec.with_params(spec.omega_mhz, spec.delta_g_mhz, -0.5e-4 * spec.v_nn_mhz);
    const StateVector b =
        ground_state(build_hamiltonian(half), BitConfig{12, neel_bits(12)}).state;
    const double sxa = real_expectation(build_total_sx(12), a);
    const double sxb = real_expectation(build_total_sx(12), b);
    CHECK(std::abs(sxa - sxb) / std::abs(sxa) < 5e-3);
    CHECK(m_afm(a) == doctest::Approx(0.9041).epsilon(0.01));
    CHECK(m_afm(b) == doctest::Approx(0.8270).epsilon(0.01));
  }
  SUBCASE("ramp preparation lands close to, but not exactly on, the exact state") {
    // At N = 8 the exact ground is still partly a symmetric/antisymmetric
    // mixture of the two orderings (the tunnel splitting beats the limit
    // field there), so the symmetry-broken ramped state overlaps it only
    // partially. Both values are recorded as regression anchors.
    const StateVector exact8 = prepare_pqg(working_point(8), PqgMethod::ExactGround);
    const StateVector ramped8 = prepare_pqg(working_point(8), PqgMethod::ProtocolRamp);
    CHECK(std::norm(inner(exact8, ramped8)) == doctest::Approx(0.6459).epsilon(0.01));

    const StateVector exact12 = prepare_pqg(working_point(12), PqgMethod::ExactGround);
    const StateVector ramped12 = prepare_pqg(working_point(12), PqgMethod::ProtocolRamp);
    const double overlap = std::norm(inner(exact12, ramped12));
    CHECK(overlap > 0.9);
    CHECK(overlap < 1.0 - 1e-6);  // the 0.3 us ramp is not strictly adiabatic
    CHECK(overlap == doctest::Approx(0.9520).epsilon(0.005));
  }
}

TEST_CASE("diagonal schedules freeze populations") {
  HamiltonianSpec spec = working_point(6, Interaction::NearestNeighbor);
  spec.omega_mhz = 0.0;
  const StateVector initial = oracles::random_state(6, 99);
  const auto times = linspace(0.0, 1.0, 5);
  const auto res = evolve(initial, spec, Schedule::constant(0.0, 4.8, 0.48, 1.0), times);
  for (const auto& state : res.states) {
    for (std::size_t k = 0; k < state.dim(); ++k)
      CHECK(std::norm(state.amp[k]) == doctest::Approx(std::norm(initial.amp[k])).epsilon(1e-9));
  }
}

TEST_CASE("early quench decay is quadratic at the drive frequency") {
  const HamiltonianSpec spec = working_point(8);
  const auto times = linspace(0.0, 0.01, 9);
  const auto res = evolve(StateVector::neel(8), spec,
                          Schedule::constant(spec.omega_mhz, spec.delta_g_mhz,
                                             spec.delta_l_mhz, 0.01),
                          times);
  const double w = angular(spec.omega_mhz);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double expected = 1.0 - w * w * t * t / 2.0;
    CHECK(std::abs(m_afm(res.states[i]) - expected) < 2e-4);  // next order is ~1e-4
  }
}

TEST_CASE("norm and energy are conserved through a quench-scale schedule") {
  const HamiltonianSpec spec = working_point(8);
  const OperatorSum h = build_hamiltonian(spec);
  const auto times = linspace(0.0, 2.0, 9);
  const auto res = evolve(StateVector::neel(8), spec,
                          Schedule::constant(spec.omega_mhz, spec.delta_g_mhz,
                                             spec.delta_l_mhz, 2.0),
                          times);
  const double e0 = real_expectation(h, res.states.front().normalized_copy());
  for (const auto& state : res.states) {
    CHECK(std::abs(state.norm() - 1.0) < 1e-8);
    const double e = real_expectation(h, state.normalized_copy());
    CHECK(std::abs(e - e0) / h.l1_coeff_norm() < 1e-8);
  }
}

TEST_CASE("evolving backwards retraces the order parameter") {
  const HamiltonianSpec spec = working_point(6);
  const auto times = linspace(0.1, 1.0, 4);
  const Schedule sched =
      Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, spec.delta_l_mhz, 1.0);
  const auto fwd = evolve(StateVector::neel(6), spec, sched, times);
  EvolveOptions opts;
  opts.negate_hamiltonian = true;
  const auto bwd = evolve(StateVector::neel(6), spec, sched, times, opts);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(m_afm(fwd.states[i]) == doctest::Approx(m_afm(bwd.states[i])).epsilon(1e-7));
}

TEST_CASE("propagator against the dense exponential") {
  for (int n : {4, 6}) {
    const HamiltonianSpec spec = working_point(n);
    const Eigen::MatrixXcd h = oracles::dense_sum(build_hamiltonian(spec));
    const StateVector initial = StateVector::neel(n);

    const double t_final = 1.0;
    const auto res = evolve(initial, spec,
                            Schedule::constant(spec.omega_mhz, spec.delta_g_mhz,
                                               spec.delta_l_mhz, t_final),
                            std::vector<double>{t_final});
    const Eigen::MatrixXcd u = (Complex(0.0, -1.0) * t_final * h).exp();
    const Eigen::VectorXcd expected = u * oracles::to_eigen(initial);
    const double fidelity = std::norm(expected.dot(oracles::to_eigen(res.states[0])));
    CHECK(fidelity > 1.0 - 1e-9);
  }
}

TEST_CASE("short-time expansion predicts the evolved order to sixth order") {
  const int n = 8;
  const HamiltonianSpec spec = working_point(n);
  const OperatorSum h = build_hamiltonian(spec);
  const OperatorSum m = build_afm_order(n);
  const StateVector neel = StateVector::neel(n);

  // series sum_{k<=4} (i^k / k!) <C_k> t^k; odd orders vanish on this state
  const double c0 = real_expectation(m, neel);
  const double c2 = real_expectation(nested_commutator(h, m, 2), neel);
  const double c4 = real_expectation(nested_commutator(h, m, 4), neel);

  std::vector<double> ts, residuals;
  EvolveOptions opts;
  opts.krylov.step_tol = 1e-13;
  for (double t = 1e-4; t <= 1.0001e-2; t *= std::pow(10.0, 0.25)) {
    const auto res = evolve(neel, spec,
                            Schedule::constant(spec.omega_mhz, spec.delta_g_mhz,
                                               spec.delta_l_mhz, t),
                            std::vector<double>{t}, opts);
    const double series = c0 - c2 * t * t / 2.0 + c4 * t * t * t * t / 24.0;
    const double r = std::abs(m_afm(res.states[0]) - series);
    if (r > 1e-13) {  // below that the subtraction is dominated by roundoff
      ts.push_back(std::log(t));
      residuals.push_back(std::log(r));
    }
  }
  REQUIRE(ts.size() >= 4);
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    xm += ts[i];
    ym += residuals[i];
  }
  xm /= ts.size();
  ym /= ts.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - xm) * (ts[i] - xm);
    sxy += (ts[i] - xm) * (residuals[i] - ym);
  }
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("exhausted restarts surface as a convergence error") {
  GroundStateOptions opts;
  opts.max_basis = 2;
  opts.max_restarts = 1;
  CHECK_THROWS_AS(ground_state(build_hamiltonian(working_point(8)), std::nullopt, opts),
                  ConvergenceError);
}

TEST_CASE("the sample at t = 0 is the initial state") {
  const HamiltonianSpec spec = working_point(6);
  const StateVector initial = oracles::random_state(6, 7);
  const auto res = evolve(initial, spec, Schedule::constant(1.8, 4.8, 0.48, 0.5),
                          std::vector<double>{0.0, 0.5});
  for (std::size_t k = 0; k < initial.dim(); ++k)
    CHECK(res.states[0].amp[k] == initial.amp[k]);
}

TEST_CASE("evolve argument validation") {
  const HamiltonianSpec spec = working_point(4);
  const Schedule sched = Schedule::constant(1.0, 1.0, 0.1, 1.0);
  CHECK_THROWS_AS(
      evolve(StateVector::neel(4), spec, sched, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(
      evolve(StateVector::neel(4), spec, sched, std::vector<double>{0.0, 2.0}), DomainError);
  EvolveOptions opts;
  opts.trajectories = 10;  // trajectories without noise
  CHECK_THROWS_AS(
      evolve(StateVector::neel(4), spec, sched, std::vector<double>{0.5}, opts), DomainError);
}
