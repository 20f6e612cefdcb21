#pragma once

#include "rdrl/agents/agent.hpp"
#include "rdrl/agents/rollout.hpp"
#include "rdrl/nn/adam.hpp"
#include "rdrl/nn/gaussian.hpp"

namespace rdrl::agents {

/// Gaussian policy with a tanh-squashed output and a state-value network.
struct ActorCritic {
  nn::GaussianPolicy policy;
  nn::Mlp value;
};

ActorCritic make_actor_critic(int obs_dim, int action_dim, const std::vector<int>& hidden,
                              double initial_log_std, Rng& rng);

/// Shared rollout collection for PPO and TRPO; subclasses supply the update.
class OnPolicyAgent : public Agent {
 public:
  OnPolicyAgent(ActorCritic nets, int rollout_steps, double gamma, double lambda);

  int observation_size() const override { return nets_.policy.mean_net().input_size(); }
  ActStep act(const Eigen::VectorXd& obs, Rng& rng) override;
  Eigen::VectorXd act_deterministic(const Eigen::VectorXd& obs) const override;
  std::optional<UpdateReport> observe(const Transition& t, Rng& rng) override;
  Checkpoint checkpoint() const override;
  void restore(const Checkpoint& ckpt) override;

  const ActorCritic& nets() const { return nets_; }
  ActorCritic& nets() { return nets_; }

 protected:
  virtual UpdateReport update(RolloutBatch& batch, Rng& rng) = 0;

  ActorCritic nets_;
  RolloutBuffer buffer_;
  double gamma_;
  double lambda_;
};

}  // namespace rdrl::agents
