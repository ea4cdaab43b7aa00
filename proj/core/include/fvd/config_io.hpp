#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "fvd/protocols.hpp"

namespace fvd {

inline constexpr int kConfigSchemaVersion = 1;

/// Parses and validates a run configuration. Keys mirror the field names;
/// unknown keys are rejected by name. The optional "meta" object is free-form
/// and ignored.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Canonical fully-resolved dump (defaults filled in, keys sorted); the
/// round-trip config_from_json(config_to_json(c)) is the identity.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Applies one "dotted.path=value" override to a raw config document.
/// Values parse as JSON scalars where possible, otherwise as strings.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// FNV-1a over the canonical dump; stable across platforms and runs.
std::uint64_t config_hash(const nlohmann::json& resolved);
std::string hash_string(std::uint64_t h);

}  // namespace fvd
