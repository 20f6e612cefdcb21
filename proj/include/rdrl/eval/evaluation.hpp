#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdrl/agents/agent.hpp"
#include "rdrl/env/driving_env.hpp"
#include "rdrl/eval/metrics.hpp"

namespace rdrl::eval {

/// Maps the current environment and flattened observation to an action in [-1, 1]^2.
using Policy = std::function<env::ContinuousAction(const env::DrivingEnv&, const Eigen::VectorXd&)>;

/// Deterministic (mean-action) policy of a trained agent.
Policy agent_policy(const agents::Agent& agent);

struct EvalOptions {
  int rounds = 50;
  std::uint64_t seed = 0;
  int first_round = 0;  // round i uses the env seed derived from (seed, first_round + i)
  WeightVector weights;
};

MetricReport evaluate_policy(const Policy& policy, const env::EnvConfig& cfg, const EvalOptions& opt);

/// Loads the agent from the checkpoint and evaluates it; fails if the
/// checkpoint's observation size does not match the environment's.
MetricReport run_evaluation(const agents::Checkpoint& ckpt, const env::EnvConfig& cfg,
                            const EvalOptions& opt);

struct AdaptabilityEntry {
  std::string scenario;
  int rounds = 0;
  long steps = 0;
  double mean_abs_lateral = 0.0;  // m, lane-keeping proxy
  double mean_speed_ratio = 0.0;  // speed / limit, efficiency proxy
  long collisions = 0;
  int arrivals = 0;
  long lane_changes = 0;          // switches to a lane that is not a successor
  std::vector<double> min_ttc;    // per round; infinity when nothing closed in
  double min_ttc_p10 = 0.0, min_ttc_p50 = 0.0, min_ttc_p90 = 0.0;
};

std::vector<AdaptabilityEntry> adaptability_report(
    const Policy& policy, const env::EnvConfig& base, const std::vector<env::Scenario>& scenarios,
    int rounds, std::uint64_t seed);

std::vector<AdaptabilityEntry> adaptability_report(
    const agents::Checkpoint& ckpt, const env::EnvConfig& base,
    const std::vector<env::Scenario>& scenarios = {env::Scenario::kHighway, env::Scenario::kMerge},
    int rounds = 20, std::uint64_t seed = 0);

nlohmann::json to_json(const AdaptabilityEntry& e);

}  // namespace rdrl::eval
