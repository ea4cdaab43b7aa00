#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fvd/evolve.hpp"
#include "fvd/model.hpp"
#include "fvd/noise.hpp"
#include "fvd/observables.hpp"
#include "fvd/schedule.hpp"

namespace fvd {

struct LandauZenerParams {
  double delta_start_mhz = -8.0;
  double delta_end_mhz = 8.0;
  double omega_lz_mhz = 1.0;
  double duration_us = 2.0;
};

struct InitialState {
  enum class Kind { Neel, NeelPrime, Pqg, LandauZener };
  Kind kind = Kind::Neel;
  PqgMethod pqg_method = PqgMethod::ExactGround;
  LandauZenerParams landau_zener;
};

/// One reproducible run: preparation, control schedule, measurement plan.
struct ExperimentConfig {
  HamiltonianSpec spec;
  InitialState initial;
  Schedule schedule;
  std::vector<double> sample_times_us;
  std::optional<NoiseModel> noise;
  int trajectories = 1;
  std::optional<SpamModel> spam;
  std::optional<int> shots;
  std::uint64_t rng_seed = 1;
  KrylovOptions krylov;

  void validate() const;
  /// Post-quench constant schedule at the spec's own parameters.
  static Schedule quench_schedule(const HamiltonianSpec& spec, double duration_us);
};

StateVector prepare_initial(const ExperimentConfig& config);

/// Prepares the initial state, evolves it under the schedule, and samples the
/// full observable set at each requested time. Rescaling is applied against
/// the t = 0 reference. Deterministic under a fixed seed.
TimeSeries quench_experiment(const ExperimentConfig& config);

struct LandauZenerResult {
  StateVector state;
  double neel_fidelity = 0.0;
  /// Per-site excitation probability after the sweep.
  std::vector<double> site_up_probability;
};

/// Sweep from all-down with a linear detuning ramp at fixed Rabi frequency.
/// Addressed (odd-sublattice) sites sweep from delta_start to delta_end and
/// cross resonance; unaddressed sites stay parked at delta_start. Implemented
/// as linear ramps of the global and staggered detunings.
LandauZenerResult landau_zener_prepare(const HamiltonianSpec& spec, double delta_start_mhz,
                                       double delta_end_mhz, double omega_lz_mhz,
                                       double duration_us, const KrylovOptions& kopts = {});

struct RampResult {
  TimeSeries series;
  std::vector<ProjectedManifold> final_projection;  // filled when requested
};

/// Neel state driven by a sqrt-shaped Rabi ramp from zero to omega_f at the
/// spec's static detunings; the domain-length densities and filling factor
/// are tracked along the ramp.
RampResult resonance_ramp_experiment(const ExperimentConfig& config, double omega_f_mhz,
                                     double ramp_duration_us, bool with_projection = false);

}  // namespace fvd
