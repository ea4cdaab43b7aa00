#include "fvd/evolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "fvd/errors.hpp"
#include "fvd/ground_state.hpp"
#include "fvd/parallel.hpp"

namespace fvd {

namespace {

constexpr double kBoundaryEps = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct SegmentSpan {
  double t_begin = 0.0;
  double t_end = 0.0;
  bool constant = true;
};

std::vector<SegmentSpan> segment_spans(const Schedule& schedule) {
  std::vector<SegmentSpan> spans;
  double t = 0.0;
  for (const auto& seg : schedule.segments) {
    spans.push_back(SegmentSpan{t, t + seg.duration_us, seg.is_constant()});
    t += seg.duration_us;
  }
  return spans;
}

const SegmentSpan& span_at(const std::vector<SegmentSpan>& spans, double t) {
  for (const auto& s : spans) {
    if (t < s.t_end - kBoundaryEps) return s;
  }
  return spans.back();
}

/// Largest admissible step at time t: never crosses a segment boundary, and
/// inside a ramped segment stays short near the segment start where sqrt
/// lineshapes have unbounded slope.
double step_cap(const std::vector<SegmentSpan>& spans, double t) {
  const SegmentSpan& s = span_at(spans, t);
  double cap = s.t_end - t;
  if (!s.constant) {
    const double t_local = t - s.t_begin;
    const double seg_len = s.t_end - s.t_begin;
    cap = std::min(cap, std::max(2e-6 * seg_len, 0.35 * t_local));
    cap = std::min(cap, 0.02 * seg_len);
  }
  return cap;
}

struct StepOutcome {
  double tau = 0.0;
  double err = 0.0;
};

/// One adaptive Krylov step of at most h_plan from `state` (modified in
/// place). Returns the accepted step and its error estimate.
StepOutcome krylov_step(const ScheduleApplier& applier, const Schedule& schedule,
                        const NoiseModel* damping, bool negate, const KrylovOptions& kopts,
                        double t, double h_plan, StateVector& state,
                        const std::function<bool(const ArnoldiStep&, double&)>& jump_probe) {
  double h_mid = h_plan;
  for (int recenter = 0; recenter < 4; ++recenter) {
    const ControlParams params = schedule.params_at(t + h_mid / 2.0);
    GeneratorFn gen = [&](std::span<const Complex> in, std::span<Complex> out) {
      applier.apply_generator(params, damping, negate, in, out);
    };
    ArnoldiStep arnoldi(gen, std::span<const Complex>(state.amp), kopts.dim);

    double tau = h_mid;
    double err = 0.0;
    if (!arnoldi.happy_breakdown()) {
      for (;;) {
        err = arnoldi.error_estimate(tau);
        if (err <= kopts.step_tol) break;
        const double shrink =
            std::clamp(0.9 * std::pow(kopts.step_tol / err, 1.0 / kopts.dim), 0.2, 0.7);
        tau *= shrink;
        if (tau < kopts.min_step)
          throw ConvergenceError("krylov_step: step size underflow at t = " + std::to_string(t));
      }
    }
    // keep the frozen Hamiltonian close to the midpoint of the accepted step
    if (tau < 0.5 * h_mid && recenter + 1 < 4) {
      h_mid = tau;
      continue;
    }

    if (jump_probe) {
      double tau_jump = tau;
      if (jump_probe(arnoldi, tau_jump)) tau = tau_jump;  // truncated at the jump time
    }
    arnoldi.assemble(arnoldi.small_solution(tau), std::span<Complex>(state.amp));
    return StepOutcome{tau, err};
  }
  throw ConvergenceError("krylov_step: midpoint recentering failed to settle");
}

double next_step_guess(const StepOutcome& out, double tol, int dim) {
  if (out.err <= 0.0) return out.tau * 4.0;
  const double grow = std::clamp(0.9 * std::pow(tol / out.err, 1.0 / dim), 0.5, 2.0);
  return out.tau * grow;
}

class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t stream)
      : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}
  double uniform() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

void apply_decay_jump(StateVector& psi, int site) {
  const std::uint64_t bit = 1ull << site;
  for (std::size_t k = 0; k < psi.dim(); ++k) {
    if (k & bit) continue;
    psi.amp[k] = psi.amp[k | bit];
    psi.amp[k | bit] = 0.0;
  }
}

void apply_dephase_jump(StateVector& psi, int site) {
  const std::uint64_t bit = 1ull << site;
  for (std::size_t k = 0; k < psi.dim(); ++k) {
    if (!(k & bit)) psi.amp[k] = -psi.amp[k];
  }
}

/// Chooses and applies one jump channel; weights are gamma1 <n_j> for decay
/// and gamma2 ||psi||^2 per site for dephasing.
void perform_jump(StateVector& psi, const NoiseModel& noise, TrajectoryRng& rng) {
  const int n = psi.n_sites;
  std::vector<double> weights(2 * n, 0.0);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < psi.dim(); ++k) {
    const double p = std::norm(psi.amp[k]);
    norm2 += p;
    std::uint64_t occ = k;
    while (occ) {
      const int j = std::countr_zero(occ);
      weights[j] += p;
      occ &= occ - 1;
    }
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    weights[j] *= noise.gamma1();
    weights[n + j] = noise.gamma2() * norm2;
  }
  for (double w : weights) total += w;

  const double pick = rng.uniform() * total;
  double acc = 0.0;
  int channel = 2 * n - 1;
  for (int c = 0; c < 2 * n; ++c) {
    acc += weights[c];
    if (pick < acc) {
      channel = c;
      break;
    }
  }
  if (channel < n)
    apply_decay_jump(psi, channel);
  else
    apply_dephase_jump(psi, channel - n);
  psi.normalize();
}

void validate_sample_times(std::span<const double> sample_times, double duration) {
  if (sample_times.empty()) throw DomainError("evolve: sample_times must not be empty");
  double prev = -1.0;
  for (double t : sample_times) {
    if (t < 0.0 || t > duration + 1e-9)
      throw DomainError("evolve: sample time outside schedule span");
    if (t <= prev) throw DomainError("evolve: sample times must be strictly increasing");
    prev = t;
  }
}

}  // namespace

ScheduleApplier::ScheduleApplier(const HamiltonianSpec& spec) : n_(spec.n_sites) {
  spec.validate();
  const std::size_t dim = std::size_t{1} << n_;
  interaction_diag_.assign(dim, 0.0);
  n_total_.resize(dim);
  n_stagger_.resize(dim);

  std::vector<double> pair_coupling(n_ * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      pair_coupling[i * n_ + j] = angular(coupling_mhz(spec, i, j));

  std::uint64_t stag_mask = neel_bits(n_);
  for (std::size_t k = 0; k < dim; ++k) {
    n_total_[k] = static_cast<std::int8_t>(std::popcount(k));
    n_stagger_[k] = static_cast<std::int8_t>(2 * std::popcount(k & stag_mask) -
                                             std::popcount(k));
    double e = 0.0;
    for (std::uint64_t rest = k; rest;) {
      const int j = std::countr_zero(rest);
      rest &= rest - 1;
      for (std::uint64_t r2 = rest; r2;) {
        const int j2 = std::countr_zero(r2);
        r2 &= r2 - 1;
        e += pair_coupling[j * n_ + j2];
      }
    }
    interaction_diag_[k] = e;
    interaction_l1_ = std::max(interaction_l1_, std::abs(e));
  }
}

void ScheduleApplier::apply_generator(const ControlParams& p, const NoiseModel* damping,
                                      bool negate, std::span<const Complex> in,
                                      std::span<Complex> out) const {
  if (in.size() != dim() || out.size() != dim())
    throw DimensionError("ScheduleApplier: span size mismatch");
  const double w_half = angular(p.omega_mhz) / 2.0;
  const double w_dg = angular(p.delta_g_mhz);
  const double w_dl = angular(p.delta_l_mhz);
  const Complex minus_i_s = negate ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
  const double g1 = damping ? damping->gamma1() : 0.0;
  const double g2n = damping ? damping->gamma2() * n_ : 0.0;

  parallel_for_chunks(dim(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double hdiag =
          interaction_diag_[k] - w_dg * n_total_[k] + w_dl * n_stagger_[k];
      Complex acc = hdiag * in[k];
      for (int j = 0; j < n_; ++j) acc += w_half * in[k ^ (1ull << j)];
      acc *= minus_i_s;
      if (damping) acc -= 0.5 * (g1 * n_total_[k] + g2n) * in[k];
      out[k] = acc;
    }
  });
}

double ScheduleApplier::norm_bound(const ControlParams& p) const {
  return interaction_l1_ + std::abs(angular(p.delta_g_mhz)) * n_ +
         std::abs(angular(p.delta_l_mhz)) * n_ / 2.0 +
         std::abs(angular(p.omega_mhz)) * n_ / 2.0;
}

EvolutionResult evolve(const StateVector& initial, const HamiltonianSpec& spec,
                       const Schedule& schedule, std::span<const double> sample_times,
                       const EvolveOptions& opts) {
  spec.validate();
  schedule.validate();
  if (initial.n_sites != spec.n_sites) throw DimensionError("evolve: state size mismatch");
  validate_sample_times(sample_times, schedule.total_duration());
  const bool noisy = opts.noise && opts.noise->enabled;
  if (!noisy && opts.trajectories != 1)
    throw DomainError("evolve: trajectories must be 1 when noise is disabled");
  if (opts.trajectories < 1) throw DomainError("evolve: trajectories must be >= 1");
  if (noisy) {
    opts.noise->validate();
    if (!opts.sampler) throw DomainError("evolve: trajectory mode requires a sampler");
  }

  const ScheduleApplier applier(spec);
  const std::vector<SegmentSpan> spans = segment_spans(schedule);
  const double h0 = std::min(1e-3, 0.5 / applier.norm_bound(schedule.params_at(0.0)));

  EvolutionResult result;
  result.times.assign(sample_times.begin(), sample_times.end());
  result.trajectory_count = opts.trajectories;

  if (!noisy) {
    StateVector state = initial;
    double t = 0.0;
    double h_try = h0;
    const SegmentSpan* last_span = &span_at(spans, 0.0);
    for (double ts : sample_times) {
      while (t < ts - kBoundaryEps) {
        const SegmentSpan* current = &span_at(spans, t);
        if (current != last_span) {
          h_try = h0;  // restart the controller at quench boundaries
          last_span = current;
        }
        const double h_plan = std::min({h_try, ts - t, step_cap(spans, t)});
        const StepOutcome out = krylov_step(applier, schedule, nullptr,
                                            opts.negate_hamiltonian, opts.krylov, t, h_plan,
                                            state, nullptr);
        t += out.tau;
        h_try = next_step_guess(out, opts.krylov.step_tol, opts.krylov.dim);
      }
      if (std::abs(state.norm() - 1.0) > 1e-6)
        throw ConvergenceError("evolve: norm drift above 1e-6, reduce the step tolerance");
      if (opts.keep_states) result.states.push_back(state);
      if (opts.sampler) result.observable_mean.push_back(opts.sampler(state.normalized_copy()));
    }
    return result;
  }

  // trajectory mode
  const int n_traj = opts.trajectories;
  const std::size_t n_times = sample_times.size();
  std::vector<std::vector<std::vector<double>>> rows(n_traj);

  parallel_for_chunks(n_traj, [&](std::size_t begin, std::size_t end) {
    for (std::size_t traj = begin; traj < end; ++traj) {
      TrajectoryRng rng(opts.rng_seed, traj);
      StateVector state = initial.normalized_copy();
      double r_threshold = rng.uniform();
      double t = 0.0;
      double h_try = h0;
      const SegmentSpan* last_span = &span_at(spans, 0.0);
      auto& my_rows = rows[traj];
      my_rows.reserve(n_times);

      for (double ts : sample_times) {
        while (t < ts - kBoundaryEps) {
          const SegmentSpan* current = &span_at(spans, t);
          if (current != last_span) {
            h_try = h0;
            last_span = current;
          }
          const double h_plan = std::min({h_try, ts - t, step_cap(spans, t)});
          bool jumped = false;
          auto probe = [&](const ArnoldiStep& arnoldi, double& tau) -> bool {
            const double end_norm2 =
                arnoldi.solution_norm(tau) * arnoldi.solution_norm(tau);
            if (end_norm2 >= r_threshold) return false;
            // squared norm is monotone under the damped flow; bisect for the
            // crossing inside (0, tau]
            double lo = 0.0, hi = tau;
            for (int it = 0; it < 200; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double nm = arnoldi.solution_norm(mid);
              const double g = nm * nm - r_threshold;
              if (std::abs(g) < 1e-10) {
                hi = mid;
                break;
              }
              (g > 0.0 ? lo : hi) = mid;
            }
            tau = hi;
            jumped = true;
            return true;
          };
          const StepOutcome out =
              krylov_step(applier, schedule, &*opts.noise, opts.negate_hamiltonian,
                          opts.krylov, t, h_plan, state, probe);
          t += out.tau;
          if (jumped) {
            perform_jump(state, *opts.noise, rng);
            r_threshold = rng.uniform();
            h_try = h0;
          } else {
            h_try = next_step_guess(out, opts.krylov.step_tol, opts.krylov.dim);
          }
        }
        my_rows.push_back(opts.sampler(state.normalized_copy()));
      }
    }
  });

  const std::size_t n_obs = rows[0][0].size();
  result.observable_mean.assign(n_times, std::vector<double>(n_obs, 0.0));
  result.observable_se.assign(n_times, std::vector<double>(n_obs, 0.0));
  for (std::size_t ti = 0; ti < n_times; ++ti) {
    for (std::size_t oi = 0; oi < n_obs; ++oi) {
      std::vector<double> vals(n_traj);
      for (int traj = 0; traj < n_traj; ++traj) vals[traj] = rows[traj][ti][oi];
      std::vector<double> tmp = vals;
      const double mean = pairwise_sum(tmp) / n_traj;
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      result.observable_mean[ti][oi] = mean;
      result.observable_se[ti][oi] =
          n_traj > 1 ? std::sqrt(var / (static_cast<double>(n_traj) * (n_traj - 1))) : 0.0;
    }
  }
  return result;
}

StateVector prepare_pqg(const HamiltonianSpec& spec, PqgMethod method,
                        const KrylovOptions& kopts) {
  spec.validate();
  if (method == PqgMethod::ExactGround) {
    const double eps = kPqgEpsilonRel * spec.v_nn_mhz;
    const HamiltonianSpec pre = spec.with_params(spec.omega_mhz, spec.delta_g_mhz, -eps);
    return ground_state(build_hamiltonian(pre), BitConfig{spec.n_sites, neel_bits(spec.n_sites)})
        .state;
  }
  // ramp omega from zero at vanishing staggered field, sqrt lineshape
  Schedule ramp;
  ramp.segments.push_back(ScheduleSegment{kPqgRampDuration,
                                          ControlCurve::sqrt_ramp(0.0, spec.omega_mhz),
                                          ControlCurve::constant(spec.delta_g_mhz),
                                          ControlCurve::constant(0.0)});
  EvolveOptions opts;
  opts.krylov = kopts;
  const double t_end = kPqgRampDuration;
  EvolutionResult res = evolve(StateVector::neel(spec.n_sites), spec, ramp,
                               std::span<const double>(&t_end, 1), opts);
  return res.states.at(0);
}

}  // namespace fvd
