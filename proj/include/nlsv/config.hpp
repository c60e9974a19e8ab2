#pragma once

#include <filesystem>
#include "json.hpp"
#include <string>

#include "nlsv/experiments.hpp"
#include "nlsv/potentials.hpp"

namespace nlsv {

using Json = nlohmann::json;

/// Parses a JSON file; throws InvalidInput on I/O or syntax errors.
Json load_json_file(const std::filesystem::path& path);

/// {"kind", "q", "s", "sigma", "beta", "nu", "center"}; missing fields take defaults.
PotentialSpec potential_from_json(const Json& j);
Json potential_to_json(const PotentialSpec& spec);

/// Run/study config:
///   potential, delta, velocities, x0_rule {factor}, mu,
///   grid {resolution_factor, margin, potential_halfwidth, min_n},
///   dt_rule {phase_cap, refine, dt}, observe_interval, override_admissibility, out_dir
/// Unknown keys are rejected. The result is validated.
ExperimentConfig experiment_config_from_json(const Json& j);
Json experiment_config_to_json(const ExperimentConfig& config);

/// Sorted keys, all numbers as doubles.
Json canonicalize(const Json& j);

/// Hex SHA-256 of the canonical dump.
std::string config_hash(const Json& j);

}  // namespace nlsv
