#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdrl/agents/trainer.hpp"

namespace rdrl::cli {

/// Everything a training run needs. JSON schema documented in README.md.
struct RunConfig {
  agents::TrainConfig train;
  std::filesystem::path output_dir = "runs/default";
};

/// Parses a RunConfig; unknown keys and invalid values raise ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Environment section parsing, shared by evaluate/trace commands.
void merge_env_json(const nlohmann::json& j, env::EnvConfig& cfg, const std::string& context);
nlohmann::json env_to_json(const env::EnvConfig& cfg);

/// Hyperparameter grid: dotted names (e.g. "ppo.clip") to candidate values.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  double budget_fraction = 0.2;  // of the base config's episodes, per combination

  /// Cartesian product in axis order, last axis varying fastest.
  std::vector<std::vector<std::pair<std::string, nlohmann::json>>> combinations() const;
};

SweepGrid parse_sweep_grid(const nlohmann::json& j);

/// Sets a dotted hyperparameter path inside a config JSON (e.g. "ppo.clip"
/// lands at hyperparams.ppo.clip).
void apply_override(nlohmann::json& config, const std::string& dotted, const nlohmann::json& value);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace rdrl::cli
