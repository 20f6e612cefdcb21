#pragma once

#include "rdrl/agents/agent.hpp"
#include "rdrl/agents/replay_buffer.hpp"
#include "rdrl/nn/adam.hpp"
#include "rdrl/nn/mlp.hpp"

namespace rdrl::agents {

struct DdpgNets {
  nn::Mlp actor;   // obs -> action, tanh output
  nn::Mlp critic;  // [obs; action] -> Q
  nn::Mlp actor_target;
  nn::Mlp critic_target;
};

DdpgNets make_ddpg_nets(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng);

struct DdpgLosses {
  double critic_loss = 0.0;
  double actor_loss = 0.0;  // -mean Q(s, mu(s))
  double mean_q = 0.0;
};

/// theta' <- tau * theta + (1 - tau) * theta'
void soft_update(nn::Mlp& target, const nn::Mlp& online, double tau);

/// r + gamma * (1 - done) * Q'(s', mu'(s')), one entry per batch column.
Eigen::RowVectorXd critic_targets(const DdpgNets& nets, const ReplayBatch& batch, double gamma);

DdpgLosses ddpg_update(DdpgNets& nets, nn::Adam& actor_opt, nn::Adam& critic_opt,
                       const ReplayBatch& batch, const DdpgParams& hp);

class DdpgAgent : public Agent {
 public:
  DdpgAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng);

  Algorithm algorithm() const override { return Algorithm::kDdpg; }
  int observation_size() const override { return nets_.actor.input_size(); }
  std::vector<std::string> loss_names() const override;
  ActStep act(const Eigen::VectorXd& obs, Rng& rng) override;
  Eigen::VectorXd act_deterministic(const Eigen::VectorXd& obs) const override;
  std::optional<UpdateReport> observe(const Transition& t, Rng& rng) override;
  Checkpoint checkpoint() const override;
  void restore(const Checkpoint& ckpt) override;

  const DdpgNets& nets() const { return nets_; }

 private:
  DdpgParams hp_;
  DdpgNets nets_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
  ReplayBuffer buffer_;
  long steps_ = 0;
};

}  // namespace rdrl::agents
