#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdrl/agents/checkpoint.hpp"
#include "rdrl/agents/hyperparams.hpp"
#include "rdrl/common/random.hpp"

namespace rdrl::agents {

enum class Algorithm { kDdpg, kPpo, kTrpo };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

/// An exploratory decision: the env action in [-1, 1] plus whatever the
/// learner needs to store alongside it.
struct ActStep {
  Eigen::VectorXd action;
  Eigen::VectorXd raw;   // pre-squash sample (stochastic policies)
  Eigen::VectorXd mean;  // policy mean (stochastic policies)
  double log_prob = 0.0;
  double value = 0.0;
};

struct Transition {
  Eigen::VectorXd obs;
  ActStep step;
  double reward = 0.0;
  Eigen::VectorXd next_obs;
  bool terminal = false;     // true end of the MDP (collision, arrival, off-road)
  bool episode_end = false;  // terminal or truncated
};

/// Trust-region update outcome.
struct TrpoStepReport {
  bool accepted = false;
  bool cg_breakdown = false;
  bool zero_gradient = false;
  double kl = 0.0;  // measured mean KL(old || new) of the final parameters
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  double expected_improvement = 0.0;
  int backtracks = 0;
  double value_loss = 0.0;
};

struct UpdateReport {
  std::vector<double> losses;  // aligned with Agent::loss_names()
  std::optional<TrpoStepReport> trpo;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Algorithm algorithm() const = 0;
  virtual int observation_size() const = 0;
  virtual std::vector<std::string> loss_names() const = 0;

  virtual ActStep act(const Eigen::VectorXd& obs, Rng& rng) = 0;
  /// Noise-free action used at evaluation time.
  virtual Eigen::VectorXd act_deterministic(const Eigen::VectorXd& obs) const = 0;
  /// Stores a transition; returns a report when a learning update ran.
  virtual std::optional<UpdateReport> observe(const Transition& t, Rng& rng) = 0;

  /// Parameters only; metadata is filled by the caller.
  virtual Checkpoint checkpoint() const = 0;
  virtual void restore(const Checkpoint& ckpt) = 0;
};

std::unique_ptr<Agent> make_agent(Algorithm algo, int obs_dim, int action_dim,
                                  const Hyperparams& hp, Rng& init_rng);

/// Rebuilds an agent from a checkpoint written by the trainer.
std::unique_ptr<Agent> agent_from_checkpoint(const Checkpoint& ckpt);

}  // namespace rdrl::agents
