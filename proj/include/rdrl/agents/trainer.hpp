#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rdrl/agents/agent.hpp"
#include "rdrl/env/driving_env.hpp"

namespace rdrl::agents {

struct TrainConfig {
  Algorithm algorithm = Algorithm::kPpo;
  env::EnvConfig env;
  Hyperparams hp;
  std::uint64_t seed = 0;
  int episodes = 400;
};

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;               // decision steps in this episode
  long total_steps = 0;        // cumulative over training
  double episode_return = 0.0; // sum of r_total
  double mean_reward = 0.0;    // episode_return / steps
  env::TerminationCause cause = env::TerminationCause::kNone;
  int updates = 0;             // learning updates completed during the episode
  std::vector<double> losses;  // mean over those updates; empty when none
};

struct TrainResult {
  std::unique_ptr<Agent> agent;
  std::vector<EpisodeRecord> curve;
  std::vector<TrpoStepReport> trpo_steps;
  Checkpoint checkpoint;  // agent parameters plus metadata
  bool stopped_early = false;
};

/// Called after every episode; returning true ends training.
using StopCondition = std::function<bool(const std::vector<EpisodeRecord>&)>;

/// Learning-curve CSV: episode,steps,total_steps,episode_return,mean_reward,cause,
/// followed by the agent's loss names.
void write_curve_header(std::ostream& out, const std::vector<std::string>& loss_names);
void write_curve_row(std::ostream& out, const EpisodeRecord& r);

/// Seeded training run. Randomness is drawn from named substreams of `seed`
/// ("policy-init", "exploration", "update", and "env" per episode).
TrainResult train(const TrainConfig& cfg, const StopCondition& stop = {},
                  std::ostream* curve_out = nullptr);

/// Metadata the trainer stores with every checkpoint.
nlohmann::json checkpoint_metadata(const TrainConfig& cfg, int episodes_run);

/// Mean return of uniformly random actions over `episodes` episodes.
double random_policy_baseline(const env::EnvConfig& cfg, std::uint64_t seed, int episodes);

/// Mean of the last `window` episode returns (fewer if the curve is shorter).
double trailing_mean_return(const std::vector<EpisodeRecord>& curve, int window);

}  // namespace rdrl::agents
