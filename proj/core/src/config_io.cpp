#include "fvd/config_io.hpp"

#include <fstream>

#include "fvd/errors.hpp"

namespace fvd {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  if (!j[key].is_number()) throw ConfigError("key \"" + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

HamiltonianSpec spec_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"n_sites", "omega_mhz", "delta_g_mhz", "delta_l_mhz", "v_nn_mhz",
                       "interaction", "distance_mode"},
                      "hamiltonian");
  HamiltonianSpec s;
  s.n_sites = static_cast<int>(require_number(j, "n_sites", "hamiltonian"));
  s.omega_mhz = require_number(j, "omega_mhz", "hamiltonian");
  s.delta_g_mhz = require_number(j, "delta_g_mhz", "hamiltonian");
  s.delta_l_mhz = require_number(j, "delta_l_mhz", "hamiltonian");
  s.v_nn_mhz = require_number(j, "v_nn_mhz", "hamiltonian");
  const std::string inter = j.value("interaction", "power_law6");
  if (inter == "power_law6")
    s.interaction = Interaction::PowerLaw6;
  else if (inter == "nearest_neighbor")
    s.interaction = Interaction::NearestNeighbor;
  else
    throw ConfigError("hamiltonian.interaction must be power_law6 or nearest_neighbor");
  const std::string dist = j.value("distance_mode", "ring_separation");
  if (dist == "ring_separation")
    s.distance_mode = DistanceMode::RingSeparation;
  else if (dist == "chord")
    s.distance_mode = DistanceMode::Chord;
  else
    throw ConfigError("hamiltonian.distance_mode must be ring_separation or chord");
  return s;
}

json spec_to_json(const HamiltonianSpec& s) {
  return json{{"n_sites", s.n_sites},
              {"omega_mhz", s.omega_mhz},
              {"delta_g_mhz", s.delta_g_mhz},
              {"delta_l_mhz", s.delta_l_mhz},
              {"v_nn_mhz", s.v_nn_mhz},
              {"interaction",
               s.interaction == Interaction::PowerLaw6 ? "power_law6" : "nearest_neighbor"},
              {"distance_mode",
               s.distance_mode == DistanceMode::RingSeparation ? "ring_separation" : "chord"}};
}

ControlCurve curve_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"shape", "value_mhz", "from_mhz", "to_mhz"}, where);
  const std::string shape = j.value("shape", "constant");
  if (shape == "constant") return ControlCurve::constant(require_number(j, "value_mhz", where));
  const double from = require_number(j, "from_mhz", where);
  const double to = require_number(j, "to_mhz", where);
  if (shape == "linear") return ControlCurve::linear(from, to);
  if (shape == "sqrt") return ControlCurve::sqrt_ramp(from, to);
  throw ConfigError(where + ".shape must be constant, linear, or sqrt");
}

json curve_to_json(const ControlCurve& c) {
  switch (c.kind) {
    case ControlCurve::Kind::Constant: return json{{"shape", "constant"}, {"value_mhz", c.v0}};
    case ControlCurve::Kind::LinearRamp:
      return json{{"shape", "linear"}, {"from_mhz", c.v0}, {"to_mhz", c.v1}};
    case ControlCurve::Kind::SqrtRamp:
      return json{{"shape", "sqrt"}, {"from_mhz", c.v0}, {"to_mhz", c.v1}};
  }
  throw ConfigError("unreachable curve kind");
}

Schedule schedule_from_json(const json& j) {
  reject_unknown_keys(j, {"segments"}, "schedule");
  if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
    throw ConfigError("schedule.segments must be a non-empty array");
  Schedule s;
  int idx = 0;
  for (const json& seg : j["segments"]) {
    const std::string where = "schedule.segments[" + std::to_string(idx++) + "]";
    reject_unknown_keys(seg, {"duration_us", "omega", "delta_g", "delta_l"}, where);
    ScheduleSegment out;
    out.duration_us = require_number(seg, "duration_us", where);
    if (!seg.contains("omega") || !seg.contains("delta_g") || !seg.contains("delta_l"))
      throw ConfigError(where + " must define omega, delta_g, and delta_l");
    out.omega = curve_from_json(seg["omega"], where + ".omega");
    out.delta_g = curve_from_json(seg["delta_g"], where + ".delta_g");
    out.delta_l = curve_from_json(seg["delta_l"], where + ".delta_l");
    s.segments.push_back(out);
  }
  return s;
}

json schedule_to_json(const Schedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    segs.push_back(json{{"duration_us", seg.duration_us},
                        {"omega", curve_to_json(seg.omega)},
                        {"delta_g", curve_to_json(seg.delta_g)},
                        {"delta_l", curve_to_json(seg.delta_l)}});
  }
  return json{{"segments", segs}};
}

std::vector<double> sample_times_from_json(const json& j) {
  std::vector<double> times;
  if (j.is_array()) {
    for (const json& t : j) times.push_back(t.get<double>());
  } else if (j.is_object()) {
    reject_unknown_keys(j, {"start", "stop", "count"}, "sample_times_us");
    const double start = require_number(j, "start", "sample_times_us");
    const double stop = require_number(j, "stop", "sample_times_us");
    const int count = static_cast<int>(require_number(j, "count", "sample_times_us"));
    if (count < 1) throw ConfigError("sample_times_us.count must be >= 1");
    for (int i = 0; i < count; ++i)
      times.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  } else {
    throw ConfigError("sample_times_us must be an array or {start, stop, count}");
  }
  return times;
}

InitialState initial_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"kind", "pqg_method", "delta_start_mhz", "delta_end_mhz",
                       "omega_lz_mhz", "duration_us"},
                      "initial_state");
  InitialState init;
  const std::string kind = j.value("kind", "neel");
  if (kind == "neel") {
    init.kind = InitialState::Kind::Neel;
  } else if (kind == "neel_prime") {
    init.kind = InitialState::Kind::NeelPrime;
  } else if (kind == "pqg") {
    init.kind = InitialState::Kind::Pqg;
    const std::string method = j.value("pqg_method", "exact_ground");
    if (method == "exact_ground")
      init.pqg_method = PqgMethod::ExactGround;
    else if (method == "protocol_ramp")
      init.pqg_method = PqgMethod::ProtocolRamp;
    else
      throw ConfigError("initial_state.pqg_method must be exact_ground or protocol_ramp");
  } else if (kind == "landau_zener") {
    init.kind = InitialState::Kind::LandauZener;
    init.landau_zener.delta_start_mhz = require_number(j, "delta_start_mhz", "initial_state");
    init.landau_zener.delta_end_mhz = require_number(j, "delta_end_mhz", "initial_state");
    init.landau_zener.omega_lz_mhz = require_number(j, "omega_lz_mhz", "initial_state");
    init.landau_zener.duration_us = require_number(j, "duration_us", "initial_state");
  } else {
    throw ConfigError("initial_state.kind must be neel, neel_prime, pqg, or landau_zener");
  }
  return init;
}

json initial_to_json(const InitialState& init) {
  switch (init.kind) {
    case InitialState::Kind::Neel: return json{{"kind", "neel"}};
    case InitialState::Kind::NeelPrime: return json{{"kind", "neel_prime"}};
    case InitialState::Kind::Pqg:
      return json{{"kind", "pqg"},
                  {"pqg_method", init.pqg_method == PqgMethod::ExactGround ? "exact_ground"
                                                                           : "protocol_ramp"}};
    case InitialState::Kind::LandauZener:
      return json{{"kind", "landau_zener"},
                  {"delta_start_mhz", init.landau_zener.delta_start_mhz},
                  {"delta_end_mhz", init.landau_zener.delta_end_mhz},
                  {"omega_lz_mhz", init.landau_zener.omega_lz_mhz},
                  {"duration_us", init.landau_zener.duration_us}};
  }
  throw ConfigError("unreachable initial kind");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration root must be an object");
  reject_unknown_keys(j,
                      {"schema_version", "meta", "hamiltonian", "initial_state", "schedule",
                       "sample_times_us", "noise", "trajectories", "spam", "shots", "rng_seed",
                       "krylov"},
                      "configuration root");
  if (!j.contains("schema_version"))
    throw ConfigError("missing key \"schema_version\" in configuration root");
  if (j["schema_version"].get<int>() != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
  if (!j.contains("hamiltonian")) throw ConfigError("missing key \"hamiltonian\"");
  if (!j.contains("schedule")) throw ConfigError("missing key \"schedule\"");
  if (!j.contains("sample_times_us")) throw ConfigError("missing key \"sample_times_us\"");

  ExperimentConfig cfg;
  cfg.spec = spec_from_json(j["hamiltonian"]);
  if (j.contains("initial_state")) cfg.initial = initial_from_json(j["initial_state"]);
  cfg.schedule = schedule_from_json(j["schedule"]);
  cfg.sample_times_us = sample_times_from_json(j["sample_times_us"]);
  if (j.contains("noise") && !j["noise"].is_null()) {
    reject_unknown_keys(j["noise"], {"enabled", "t1_us", "t2_star_us"}, "noise");
    NoiseModel n;
    n.enabled = j["noise"].value("enabled", true);
    n.t1_us = number_or(j["noise"], "t1_us", n.t1_us);
    n.t2_star_us = number_or(j["noise"], "t2_star_us", n.t2_star_us);
    cfg.noise = n;
  }
  if (j.contains("trajectories")) cfg.trajectories = j["trajectories"].get<int>();
  if (j.contains("spam") && !j["spam"].is_null()) {
    reject_unknown_keys(j["spam"], {"p1", "p2"}, "spam");
    SpamModel s;
    s.p1 = number_or(j["spam"], "p1", s.p1);
    s.p2 = number_or(j["spam"], "p2", s.p2);
    cfg.spam = s;
  }
  if (j.contains("shots") && !j["shots"].is_null()) cfg.shots = j["shots"].get<int>();
  if (j.contains("rng_seed")) cfg.rng_seed = j["rng_seed"].get<std::uint64_t>();
  if (j.contains("krylov")) {
    reject_unknown_keys(j["krylov"], {"dim", "step_tol"}, "krylov");
    cfg.krylov.dim = static_cast<int>(number_or(j["krylov"], "dim", cfg.krylov.dim));
    cfg.krylov.step_tol = number_or(j["krylov"], "step_tol", cfg.krylov.step_tol);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["hamiltonian"] = spec_to_json(config.spec);
  j["initial_state"] = initial_to_json(config.initial);
  j["schedule"] = schedule_to_json(config.schedule);
  j["sample_times_us"] = config.sample_times_us;
  j["noise"] = nullptr;
  if (config.noise)
    j["noise"] = json{{"enabled", config.noise->enabled},
                      {"t1_us", config.noise->t1_us},
                      {"t2_star_us", config.noise->t2_star_us}};
  j["trajectories"] = config.trajectories;
  j["spam"] = nullptr;
  if (config.spam) j["spam"] = json{{"p1", config.spam->p1}, {"p2", config.spam->p2}};
  j["shots"] = nullptr;
  if (config.shots) j["shots"] = *config.shots;
  j["rng_seed"] = config.rng_seed;
  j["krylov"] = json{{"dim", config.krylov.dim}, {"step_tol", config.krylov.step_tol}};
  return j;
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like dotted.key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json* node = &j;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot - begin);
    if (key.empty()) throw ConfigError("empty key segment in override: " + assignment);
    if (dot == std::string::npos) {
      json value;
      try {
        value = json::parse(raw);
      } catch (const json::parse_error&) {
        value = raw;  // bare strings pass through
      }
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    begin = dot + 1;
  }
}

std::uint64_t config_hash(const nlohmann::json& resolved) {
  const std::string dump = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_string(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace fvd
