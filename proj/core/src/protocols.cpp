#include "fvd/protocols.hpp"

#include <cmath>

#include "fvd/errors.hpp"

namespace fvd {

void ExperimentConfig::validate() const {
  spec.validate();
  schedule.validate();
  if (sample_times_us.empty()) throw DomainError("config: sample_times must not be empty");
  const double span = schedule.total_duration();
  double prev = -1.0;
  for (double t : sample_times_us) {
    if (t < 0.0 || t > span + 1e-9) throw DomainError("config: sample time outside schedule");
    if (t <= prev) throw DomainError("config: sample times must be strictly increasing");
    prev = t;
  }
  const bool noisy = noise && noise->enabled;
  if (!noisy && trajectories != 1)
    throw DomainError("config: trajectories must be 1 when noise is absent");
  if (trajectories < 1) throw DomainError("config: trajectories must be >= 1");
  if (noisy) noise->validate();
  if (spam) spam->validate();
  if (shots && *shots < 1) throw DomainError("config: shots must be >= 1");
  if (shots && noisy)
    throw DomainError("config: shot sampling is supported for unitary runs only");
}

Schedule ExperimentConfig::quench_schedule(const HamiltonianSpec& spec, double duration_us) {
  return Schedule::constant(spec.omega_mhz, spec.delta_g_mhz, spec.delta_l_mhz, duration_us);
}

StateVector prepare_initial(const ExperimentConfig& config) {
  const int n = config.spec.n_sites;
  switch (config.initial.kind) {
    case InitialState::Kind::Neel: return StateVector::neel(n);
    case InitialState::Kind::NeelPrime: return StateVector::neel_prime(n);
    case InitialState::Kind::Pqg:
      return prepare_pqg(config.spec, config.initial.pqg_method, config.krylov);
    case InitialState::Kind::LandauZener: {
      const auto& lz = config.initial.landau_zener;
      return landau_zener_prepare(config.spec, lz.delta_start_mhz, lz.delta_end_mhz,
                                  lz.omega_lz_mhz, lz.duration_us, config.krylov)
          .state;
    }
  }
  throw DomainError("prepare_initial: unknown initial state kind");
}

namespace {

/// Estimates the observable set from sampled bitstrings (shot mode).
ObservableSample estimate_from_shots(const StateVector& state, int shots,
                                     const std::optional<SpamModel>& spam,
                                     std::uint64_t seed) {
  const int n = state.n_sites;
  const std::vector<BitConfig> draws = sample_bitstrings(state, shots, spam, seed);
  ObservableSample s;
  std::vector<double> sigma(n - 1, 0.0);
  std::vector<double> sz(n, 0.0);
  for (const BitConfig& b : draws) {
    s.m_afm += m_afm_of_bits(b);
    const std::vector<double> counts = bubble_counts_of_bits(b);
    for (int ell = 0; ell < n - 1; ++ell) sigma[ell] += counts[ell];
    for (int j = 0; j < n; ++j) sz[j] += ((b.bits >> j) & 1) ? 1.0 : -1.0;
  }
  const double inv = 1.0 / shots;
  s.m_afm *= inv;
  for (int ell = 0; ell < n - 1; ++ell) {
    const double val = sigma[ell] * inv / n;
    s.sigma_l[ell + 1] = val;
    s.rho += (ell + 2.0) * val;
  }
  for (double& v : sz) v *= inv;
  s.site_sz = std::move(sz);
  s.sx_total = 0.0;  // not measurable in the occupation basis
  return s;
}

}  // namespace

TimeSeries quench_experiment(const ExperimentConfig& config) {
  config.validate();
  const StateVector initial = prepare_initial(config);
  const bool noisy = config.noise && config.noise->enabled;

  EvolveOptions opts;
  opts.noise = noisy ? config.noise : std::nullopt;
  opts.trajectories = config.trajectories;
  opts.rng_seed = config.rng_seed;
  opts.krylov = config.krylov;
  const bool shot_mode = !noisy && config.shots.has_value();
  if (!shot_mode) {
    // stream observables instead of storing every sampled state
    opts.sampler = [](const StateVector& s) { return flatten_observables(s); };
    opts.keep_states = false;
  }

  const EvolutionResult evo =
      evolve(initial, config.spec, config.schedule, config.sample_times_us, opts);

  TimeSeries series;
  series.trajectory_count = config.trajectories;
  if (!noisy) {
    for (std::size_t i = 0; i < evo.times.size(); ++i) {
      ObservableSample s;
      if (shot_mode) {
        const std::uint64_t shot_seed = config.rng_seed ^ (0x517cc1b727220a95ull * (i + 1));
        s = estimate_from_shots(evo.states[i], *config.shots, config.spam, shot_seed);
      } else {
        s = unflatten_observables(config.spec.n_sites, evo.observable_mean[i]);
      }
      s.time_us = evo.times[i];
      series.samples.push_back(std::move(s));
    }
  } else {
    for (std::size_t i = 0; i < evo.times.size(); ++i) {
      ObservableSample mean =
          unflatten_observables(config.spec.n_sites, evo.observable_mean[i]);
      mean.time_us = evo.times[i];
      series.samples.push_back(std::move(mean));
      ObservableSample se = unflatten_observables(config.spec.n_sites, evo.observable_se[i]);
      se.time_us = evo.times[i];
      series.stderrs.push_back(std::move(se));
    }
  }
  apply_rescaling(series);
  return series;
}

LandauZenerResult landau_zener_prepare(const HamiltonianSpec& spec, double delta_start_mhz,
                                       double delta_end_mhz, double omega_lz_mhz,
                                       double duration_us, const KrylovOptions& kopts) {
  spec.validate();
  if (!(duration_us > 0.0)) throw DomainError("landau_zener_prepare: duration must be > 0");

  // Addressed sites see delta_g - delta_l sweep linearly start -> end while
  // unaddressed ones hold at the start value: delta_g = (sweep + start)/2,
  // delta_l = (start - sweep)/2.
  Schedule sweep;
  sweep.segments.push_back(ScheduleSegment{
      duration_us, ControlCurve::constant(omega_lz_mhz),
      ControlCurve::linear(delta_start_mhz, 0.5 * (delta_end_mhz + delta_start_mhz)),
      ControlCurve::linear(0.0, 0.5 * (delta_start_mhz - delta_end_mhz))});

  EvolveOptions opts;
  opts.krylov = kopts;
  const double t_end = duration_us;
  EvolutionResult evo = evolve(StateVector::all_down(spec.n_sites), spec, sweep,
                               std::span<const double>(&t_end, 1), opts);

  LandauZenerResult result;
  result.state = std::move(evo.states.at(0));
  const Complex overlap = inner(StateVector::neel(spec.n_sites), result.state);
  result.neel_fidelity = std::norm(overlap);
  result.site_up_probability.assign(spec.n_sites, 0.0);
  for (std::size_t k = 0; k < result.state.dim(); ++k) {
    const double p = std::norm(result.state.amp[k]);
    for (int j = 0; j < spec.n_sites; ++j)
      if ((k >> j) & 1) result.site_up_probability[j] += p;
  }
  return result;
}

RampResult resonance_ramp_experiment(const ExperimentConfig& config, double omega_f_mhz,
                                     double ramp_duration_us, bool with_projection) {
  ExperimentConfig cfg = config;
  cfg.initial.kind = InitialState::Kind::Neel;
  Schedule ramp;
  ramp.segments.push_back(ScheduleSegment{
      ramp_duration_us, ControlCurve::sqrt_ramp(0.0, omega_f_mhz),
      ControlCurve::constant(cfg.spec.delta_g_mhz), ControlCurve::constant(cfg.spec.delta_l_mhz)});
  cfg.schedule = ramp;
  if (cfg.sample_times_us.empty() || cfg.sample_times_us.back() > ramp_duration_us) {
    cfg.sample_times_us.clear();
    for (int i = 0; i <= 20; ++i) cfg.sample_times_us.push_back(ramp_duration_us * i / 20.0);
  }

  RampResult out;
  out.series = quench_experiment(cfg);
  if (with_projection) {
    const StateVector final_state = [&] {
      ExperimentConfig one = cfg;
      one.sample_times_us = {ramp_duration_us};
      one.shots.reset();
      const StateVector initial = prepare_initial(one);
      EvolveOptions opts;
      opts.krylov = one.krylov;
      EvolutionResult evo = evolve(initial, one.spec, one.schedule, one.sample_times_us, opts);
      return evo.states.at(0);
    }();
    const BitConfig reference{cfg.spec.n_sites, neel_bits(cfg.spec.n_sites)};
    out.final_projection = landscape_projection(final_state, landscape(cfg.spec, reference));
  }
  return out;
}

}  // namespace fvd
