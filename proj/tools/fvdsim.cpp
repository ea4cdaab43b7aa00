// fvdsim: batch front end for the ring false-vacuum simulator.
//
// Subcommands: evolve, scan-deltal, resonance, bch, landscape, selftest.
// Every run writes its artifacts plus a run_manifest.json that records the
// resolved-config hash, the seed, and the produced files, so a run can be
// reproduced byte-for-byte from manifest + config at a fixed thread count.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fvd/analysis.hpp"
#include "fvd/bch.hpp"
#include "fvd/checkpoint.hpp"
#include "fvd/config_io.hpp"
#include "fvd/errors.hpp"
#include "fvd/evolve.hpp"
#include "fvd/ground_state.hpp"
#include "fvd/liouvillian.hpp"
#include "fvd/model.hpp"
#include "fvd/observables.hpp"
#include "fvd/parallel.hpp"
#include "fvd/protocols.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fvd;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

struct RunContext {
  fs::path output_dir = ".";
  json resolved_config;
  json extra;  // command-specific resolved options, folded into the hash
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  fs::path path(const std::string& name) {
    outputs.push_back(name);
    return output_dir / name;
  }

  void write_manifest() {
    json manifest;
    manifest["schema_version"] = 1;
    manifest["tool_version"] = kToolVersion;
    json hashed = resolved_config;
    hashed["command_options"] = extra;
    manifest["config_hash"] = hash_string(config_hash(hashed));
    manifest["rng_seed"] = seed;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest["outputs"] = outputs;
    std::ofstream out(output_dir / "run_manifest.json");
    out << manifest.dump(2) << "\n";
  }
};

ExperimentConfig load_with_overrides(const std::string& config_path,
                                     const std::vector<std::string>& overrides,
                                     json* resolved_out) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("cannot open configuration file: " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration parse error: " + std::string(e.what()));
  }
  for (const std::string& ov : overrides) apply_override(j, ov);
  ExperimentConfig cfg = config_from_json(j);
  if (resolved_out) *resolved_out = config_to_json(cfg);
  return cfg;
}

void write_timeseries_csv(const fs::path& file, const TimeSeries& series) {
  std::ofstream out(file);
  const bool with_se = !series.stderrs.empty();
  out << "t_us,m_afm,m_afm_res,sigma_1,sigma_2,sigma_3,rho,sx_total";
  if (with_se)
    out << ",m_afm_stderr,m_afm_res_stderr,sigma_1_stderr,sigma_2_stderr,sigma_3_stderr,"
           "rho_stderr,sx_total_stderr";
  out << "\n";
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    auto sig = [&](const ObservableSample& smp, int ell) {
      auto it = smp.sigma_l.find(ell);
      return it == smp.sigma_l.end() ? 0.0 : it->second;
    };
    out << fmt(s.time_us) << ',' << fmt(s.m_afm) << ',' << fmt(s.m_afm_rescaled) << ','
        << fmt(sig(s, 1)) << ',' << fmt(sig(s, 2)) << ',' << fmt(sig(s, 3)) << ','
        << fmt(s.rho) << ',' << fmt(s.sx_total);
    if (with_se) {
      const auto& e = series.stderrs[i];
      out << ',' << fmt(e.m_afm) << ',' << fmt(e.m_afm_rescaled) << ',' << fmt(sig(e, 1))
          << ',' << fmt(sig(e, 2)) << ',' << fmt(sig(e, 3)) << ',' << fmt(e.rho) << ','
          << fmt(e.sx_total);
    }
    out << "\n";
  }
}

std::vector<double> parse_ratio_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin < csv.size()) {
    const std::size_t comma = csv.find(',', begin);
    const std::string tok = csv.substr(begin, comma - begin);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& output_dir, const std::string& state_out) {
  RunContext ctx;
  ctx.output_dir = output_dir;
  const ExperimentConfig cfg = load_with_overrides(config_path, overrides, &ctx.resolved_config);
  ctx.seed = cfg.rng_seed;
  ctx.extra = json{{"command", "evolve"}};

  const TimeSeries series = quench_experiment(cfg);
  write_timeseries_csv(ctx.path("timeseries.csv"), series);

  if (!state_out.empty() && (!cfg.noise || !cfg.noise->enabled)) {
    ExperimentConfig last = cfg;
    last.sample_times_us = {cfg.sample_times_us.back()};
    const StateVector initial = prepare_initial(last);
    EvolveOptions opts;
    opts.krylov = last.krylov;
    const auto evo = evolve(initial, last.spec, last.schedule, last.sample_times_us, opts);
    write_state_checkpoint((ctx.output_dir / state_out).string(), evo.states.at(0));
    ctx.outputs.push_back(state_out);
  }

  ctx.write_manifest();
  return 0;
}

// ----------------------------------------------------------- scan-deltal

int cmd_scan_deltal(const std::string& config_path, const std::vector<std::string>& overrides,
                    const std::string& output_dir, const std::string& state_name,
                    const std::string& ratio_csv) {
  RunContext ctx;
  ctx.output_dir = output_dir;
  ExperimentConfig base = load_with_overrides(config_path, overrides, &ctx.resolved_config);
  ctx.seed = base.rng_seed;
  const std::vector<double> ratios = parse_ratio_list(ratio_csv);
  if (ratios.empty()) throw ConfigError("scan-deltal: the ratio list is empty");
  ctx.extra = json{{"command", "scan-deltal"}, {"state", state_name}, {"ratios", ratios}};

  if (state_name == "pqg") {
    base.initial.kind = InitialState::Kind::Pqg;
  } else if (state_name == "neel") {
    base.initial.kind = InitialState::Kind::Neel;
  } else {
    throw ConfigError("scan-deltal: state must be neel or pqg");
  }

  struct PointResult {
    double ratio = 0.0;
    FitResult fit;
  };
  std::vector<PointResult> points(ratios.size());
  parallel_for_chunks(ratios.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      ExperimentConfig cfg = base;
      cfg.spec.delta_l_mhz = cfg.spec.v_nn_mhz / ratios[i];
      const FitWindow window = formula_window(ratios[i]);
      const double horizon = window.t_end_us * 1.02;
      cfg.schedule = ExperimentConfig::quench_schedule(cfg.spec, horizon);
      cfg.sample_times_us.clear();
      for (int k = 0; k <= 240; ++k) cfg.sample_times_us.push_back(horizon * k / 240.0);
      const TimeSeries series = quench_experiment(cfg);
      points[i].ratio = ratios[i];
      points[i].fit = fit_decay(series.rescaled_series(), window);
    }
  });

  {
    std::ofstream out(ctx.path("scan.csv"));
    out << "v_over_dl,gamma,gamma_stderr,r_squared,window_start,window_end,method\n";
    for (const auto& p : points) {
      out << fmt(p.ratio) << ',' << fmt(p.fit.gamma) << ',' << fmt(p.fit.gamma_stderr) << ','
          << fmt(p.fit.r_squared) << ',' << fmt(p.fit.window.t_start_us) << ','
          << fmt(p.fit.window.t_end_us) << ",formula\n";
    }
  }

  std::vector<ScalingPoint> fit_points;
  for (const auto& p : points) {
    if (p.fit.gamma > 0.0)
      fit_points.push_back(
          ScalingPoint{p.ratio, p.fit.gamma, angular(base.spec.omega_mhz)});
  }
  json fit_json;
  if (fit_points.size() >= 4) {
    const ScalingFit fit = scaling_fit(fit_points);
    fit_json = json{{"lambda", fit.lambda},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"lambda_stderr", fit.lambda_stderr},
                    {"range", fit.range_used}};
  } else {
    fit_json = json{{"error", "fewer than 4 positive rates; no scaling fit"}};
  }
  {
    std::ofstream out(ctx.path("scaling_fit.json"));
    out << fit_json.dump(2) << "\n";
  }
  ctx.write_manifest();
  return 0;
}

// ------------------------------------------------------------- resonance

int cmd_resonance(const std::string& config_path, const std::vector<std::string>& overrides,
                  const std::string& output_dir, int length, const std::string& ratio_csv,
                  double omega_f, double duration, bool with_landscape) {
  RunContext ctx;
  ctx.output_dir = output_dir;
  ExperimentConfig base = load_with_overrides(config_path, overrides, &ctx.resolved_config);
  ctx.seed = base.rng_seed;
  const std::vector<double> ratios = parse_ratio_list(ratio_csv);
  if (ratios.empty()) throw ConfigError("resonance: the ratio list is empty");
  if (length < 1) throw ConfigError("resonance: length must be >= 1");
  ctx.extra = json{{"command", "resonance"},  {"length", length},       {"ratios", ratios},
                   {"omega_f_mhz", omega_f},  {"duration_us", duration},
                   {"landscape", with_landscape}};

  const ResonanceScan scan = resonance_scan(base, ratios, length, omega_f, duration);
  {
    std::ofstream out(ctx.path("resonance.csv"));
    out << "v_over_dl,sigma_" << length << "_final\n";
    for (const auto& p : scan.points) out << fmt(p.v_over_dl) << ',' << fmt(p.sigma_final) << "\n";
  }
  {
    json peak{{"length", length},
              {"has_peak", scan.has_peak},
              {"peak_ratio", scan.peak_ratio},
              {"peak_value", scan.peak_value},
              {"expected_ratio", bubble_resonance_ratio(length)}};
    std::ofstream out(ctx.path("peak.json"));
    out << peak.dump(2) << "\n";
  }

  if (with_landscape) {
    ExperimentConfig cfg = base;
    cfg.spec.delta_l_mhz = cfg.spec.v_nn_mhz / bubble_resonance_ratio(length);
    const RampResult run = resonance_ramp_experiment(cfg, omega_f, duration, true);
    std::ofstream out(ctx.path("landscape_projection.csv"));
    out << "hamming_distance,energy_over_v,probability\n";
    for (const auto& p : run.final_projection)
      out << p.hamming_distance << ',' << fmt(p.energy_over_v) << ',' << fmt(p.probability)
          << "\n";
  }
  ctx.write_manifest();
  return 0;
}

// ------------------------------------------------------------------- bch

int cmd_bch(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& output_dir, int max_order) {
  RunContext ctx;
  ctx.output_dir = output_dir;
  const ExperimentConfig cfg = load_with_overrides(config_path, overrides, &ctx.resolved_config);
  ctx.seed = cfg.rng_seed;
  ctx.extra = json{{"command", "bch"}, {"max_order", max_order}};
  if (max_order < 0 || max_order > kDefaultMaxBchOrder)
    throw ConfigError("bch: max_order must lie in [0, " +
                      std::to_string(kDefaultMaxBchOrder) + "]");

  const StateVector pqg = prepare_pqg(cfg.spec);
  const auto reports = bch_reports(cfg.spec, pqg, max_order);

  json out_json = json::array();
  for (const auto& rep : reports) {
    json analytic{{"neel", nullptr}, {"pqg", nullptr}};
    json abs_error{{"neel", nullptr}, {"pqg", nullptr}};
    if (rep.analytic_neel) {
      analytic["neel"] = *rep.analytic_neel;
      abs_error["neel"] = std::abs(rep.expectation_neel - *rep.analytic_neel);
    }
    if (rep.analytic_pqg) {
      analytic["pqg"] = *rep.analytic_pqg;
      abs_error["pqg"] = std::abs(rep.expectation_pqg - *rep.analytic_pqg);
    }
    out_json.push_back(json{{"order", rep.order},
                            {"term_count", rep.term_count},
                            {"expectation_neel", rep.expectation_neel},
                            {"expectation_pqg", rep.expectation_pqg},
                            {"analytic_reference", analytic},
                            {"abs_error", abs_error}});
  }
  {
    std::ofstream out(ctx.path("bch_report.json"));
    out << out_json.dump(2) << "\n";
  }
  ctx.write_manifest();
  return 0;
}

// ------------------------------------------------------------- landscape

int cmd_landscape(const std::string& config_path, const std::vector<std::string>& overrides,
                  const std::string& output_dir, const std::string& reference_bits,
                  const std::string& project_state) {
  RunContext ctx;
  ctx.output_dir = output_dir;
  const ExperimentConfig cfg = load_with_overrides(config_path, overrides, &ctx.resolved_config);
  ctx.seed = cfg.rng_seed;
  ctx.extra =
      json{{"command", "landscape"}, {"reference", reference_bits}, {"project", project_state}};

  BitConfig reference{cfg.spec.n_sites, neel_bits(cfg.spec.n_sites)};
  if (!reference_bits.empty()) {
    reference = BitConfig::from_string(reference_bits);
    if (reference.n_sites != cfg.spec.n_sites)
      throw ConfigError("landscape: reference length must equal n_sites");
  }

  const auto manifolds = landscape(cfg.spec, reference);
  {
    std::ofstream out(ctx.path("landscape.csv"));
    out << "hamming_distance,energy_over_v,degeneracy,example_bitstring\n";
    for (const auto& m : manifolds) {
      out << m.hamming_distance << ',' << fmt(m.energy_over_v) << ',' << m.configs.size() << ','
          << BitConfig{cfg.spec.n_sites, m.configs.front()}.to_string() << "\n";
    }
  }

  if (!project_state.empty()) {
    const StateVector psi = read_state_checkpoint(project_state);
    if (psi.n_sites != cfg.spec.n_sites)
      throw ConfigError("landscape: checkpoint size does not match n_sites");
    const auto projection = landscape_projection(psi.normalized_copy(), manifolds);
    std::ofstream out(ctx.path("landscape_projection.csv"));
    out << "hamming_distance,energy_over_v,probability\n";
    for (const auto& p : projection)
      out << p.hamming_distance << ',' << fmt(p.energy_over_v) << ',' << fmt(p.probability)
          << "\n";
  }
  ctx.write_manifest();
  return 0;
}

// -------------------------------------------------------------- selftest

int cmd_selftest() {
  int failures = 0;
  auto check = [&failures](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };

  const PauliString xy = multiply(PauliString::single(1, 0, Pauli::X),
                                  PauliString::single(1, 0, Pauli::Y));
  check(xy.letter(0) == Pauli::Z && xy.coeff == Complex(0.0, 1.0), "pauli product phase");

  HamiltonianSpec spec;
  spec.n_sites = 8;
  spec.omega_mhz = 1.8;
  spec.delta_g_mhz = 4.8;
  spec.delta_l_mhz = 0.48;
  spec.v_nn_mhz = 6.0;
  const OperatorSum h = build_hamiltonian(spec);
  check(h.is_hermitian(), "hamiltonian hermiticity");
  check(commutator(h, h).empty(), "self-commutator vanishes");

  const double c2 = real_expectation(nested_commutator(h, build_afm_order(8), 2),
                                     StateVector::neel(8));
  const double w2 = angular(spec.omega_mhz) * angular(spec.omega_mhz);
  check(std::abs(c2 - w2) / w2 < 1e-9, "second-order coefficient on the ordered state");

  check(m_afm(StateVector::neel(8)) == 1.0, "staggered order of the ordered state");
  check(bubble_density(StateVector::neel(8), 1) == 0.0, "no domains in the ordered state");

  const auto res = evolve(StateVector::neel(8), spec,
                          Schedule::constant(1.8, 4.8, 0.48, 0.1), std::vector<double>{0.1});
  check(std::abs(res.states[0].norm() - 1.0) < 1e-8, "norm conservation");

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"false-vacuum decay and bubble nucleation simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  int threads = 0;
  bool deterministic = false;
  app.add_option("--threads", threads, "cap worker threads (default: cores or FVDSIM_THREADS)");
  app.add_flag("--deterministic", deterministic, "force single-threaded reductions");

  std::string config_path, output_dir = ".", state_out, ratio_csv, state_name = "pqg";
  std::string reference_bits, project_state;
  std::vector<std::string> overrides;
  int max_order = 4, length = 2;
  double omega_f = 1.8, duration = 1.0;
  bool with_landscape = false;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--set", overrides, "override a config key: dotted.path=value");
    sub->add_option("--output-dir", output_dir, "directory for artifacts");
  };

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "run one schedule and emit a time series");
  add_common(evolve_cmd);
  evolve_cmd->add_option("--final-state", state_out,
                         "also write the final state checkpoint (unitary runs)");

  CLI::App* scan_cmd =
      app.add_subcommand("scan-deltal", "decay-rate scan over V/delta_l with formula windows");
  add_common(scan_cmd);
  scan_cmd->add_option("--ratios", ratio_csv, "comma-separated V/delta_l list")->required();
  scan_cmd->add_option("--state", state_name, "initial state: neel or pqg");

  CLI::App* res_cmd =
      app.add_subcommand("resonance", "final domain density versus V/delta_l after a ramp");
  add_common(res_cmd);
  res_cmd->add_option("--length", length, "domain length L")->required();
  res_cmd->add_option("--ratios", ratio_csv, "comma-separated V/delta_l list")->required();
  res_cmd->add_option("--omega-f", omega_f, "final Rabi frequency of the ramp, MHz");
  res_cmd->add_option("--duration", duration, "ramp duration, us");
  res_cmd->add_flag("--landscape", with_landscape,
                    "also project the final state onto the energy landscape");

  CLI::App* bch_cmd =
      app.add_subcommand("bch", "nested-commutator report for the staggered order");
  add_common(bch_cmd);
  bch_cmd->add_option("--max-order", max_order, "highest order (cap 6)");

  CLI::App* land_cmd = app.add_subcommand("landscape", "static energy landscape export");
  add_common(land_cmd);
  land_cmd->add_option("--reference", reference_bits, "reference bitstring (default Neel)");
  land_cmd->add_option("--project", project_state,
                       "state checkpoint to project onto the manifolds");

  app.add_subcommand("selftest", "quick built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  if (deterministic)
    set_max_threads(1);
  else if (threads > 0)
    set_max_threads(threads);

  try {
    if (!output_dir.empty()) fs::create_directories(output_dir);
    if (app.got_subcommand("evolve"))
      return cmd_evolve(config_path, overrides, output_dir, state_out);
    if (app.got_subcommand("scan-deltal"))
      return cmd_scan_deltal(config_path, overrides, output_dir, state_name, ratio_csv);
    if (app.got_subcommand("resonance"))
      return cmd_resonance(config_path, overrides, output_dir, length, ratio_csv, omega_f,
                           duration, with_landscape);
    if (app.got_subcommand("bch"))
      return cmd_bch(config_path, overrides, output_dir, max_order);
    if (app.got_subcommand("landscape"))
      return cmd_landscape(config_path, overrides, output_dir, reference_bits, project_state);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const DomainError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const DimensionError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitSchema;
}
