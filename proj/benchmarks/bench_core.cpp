#include <benchmark/benchmark.h>

#include <vector>

#include "fvd/bch.hpp"
#include "fvd/evolve.hpp"
#include "fvd/ground_state.hpp"
#include "fvd/model.hpp"
#include "fvd/observables.hpp"

using namespace fvd;

namespace {

HamiltonianSpec bench_spec(int n) {
  HamiltonianSpec s;
  s.n_sites = n;
  s.omega_mhz = 1.8;
  s.delta_g_mhz = 4.8;
  s.delta_l_mhz = 0.48;
  s.v_nn_mhz = 6.0;
  s.interaction = Interaction::PowerLaw6;
  return s;
}

StateVector bench_state(int n) {
  StateVector s(n);
  std::uint64_t x = 0x1234;
  for (auto& a : s.amp) {
    x = x * 6364136223846793005ull + 1442695040888963407ull;
    a = Complex(static_cast<double>(x >> 40), static_cast<double>((x >> 20) & 0xFFFFF));
  }
  s.normalize();
  return s;
}

void schedule_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScheduleApplier applier(bench_spec(n));
  const StateVector psi = bench_state(n);
  std::vector<Complex> out(psi.dim());
  const ControlParams params{1.8, 4.8, 0.48};
  for (auto _ : state) {
    applier.apply_generator(params, nullptr, false, psi.amp, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * psi.dim());
}
BENCHMARK(schedule_apply)->Arg(10)->Arg(12)->Arg(14)->Arg(16);

void compiled_operator_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CompiledOperator op(build_hamiltonian(bench_spec(n)));
  const StateVector psi = bench_state(n);
  std::vector<Complex> out(psi.dim());
  for (auto _ : state) {
    op.apply(psi.amp, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * psi.dim());
}
BENCHMARK(compiled_operator_apply)->Arg(10)->Arg(12)->Arg(14);

void nested_commutator_order(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const OperatorSum h = build_hamiltonian(bench_spec(12));
  const OperatorSum m = build_afm_order(12);
  std::size_t terms = 0;
  for (auto _ : state) {
    const OperatorSum ck = nested_commutator(h, m, order);
    terms = ck.term_count();
    benchmark::DoNotOptimize(terms);
  }
  state.counters["terms"] = static_cast<double>(terms);
}
BENCHMARK(nested_commutator_order)->DenseRange(1, 5);

void operator_expectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OperatorSum h = build_hamiltonian(bench_spec(n));
  const StateVector psi = bench_state(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(h, psi));
  }
}
BENCHMARK(operator_expectation)->Arg(10)->Arg(12)->Arg(14);

void quench_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianSpec spec = bench_spec(n);
  const Schedule sched = Schedule::constant(1.8, 4.8, 0.48, 0.01);
  const std::vector<double> times{0.01};
  for (auto _ : state) {
    const auto res = evolve(StateVector::neel(n), spec, sched, times);
    benchmark::DoNotOptimize(res.states[0].amp.data());
  }
}
BENCHMARK(quench_step)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void lanczos_ground_state(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const OperatorSum h = build_hamiltonian(bench_spec(n));
  const BitConfig seed{n, neel_bits(n)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_state(h, seed).energy);
  }
}
BENCHMARK(lanczos_ground_state)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void domain_densities(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StateVector psi = bench_state(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(all_bubble_densities(psi));
  }
  state.SetItemsProcessed(state.iterations() * psi.dim());
}
BENCHMARK(domain_densities)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
