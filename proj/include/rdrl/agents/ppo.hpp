#pragma once

#include "rdrl/agents/on_policy.hpp"

namespace rdrl::agents {

struct PpoLosses {
  double policy_loss = 0.0;  // negated clipped surrogate
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;    // mean KL(old || new) after the last epoch run
  double clip_fraction = 0.0;
  int epochs_run = 0;
};

struct SurrogateEval {
  double objective = 0.0;       // mean clipped surrogate plus entropy bonus
  Eigen::VectorXd gradient;     // ascent direction, policy parameter layout
  double clip_fraction = 0.0;
};

/// Clipped surrogate and its gradient on `batch` (advantages already set).
SurrogateEval ppo_surrogate(const nn::GaussianPolicy& policy, const RolloutBatch& batch,
                            double clip, double entropy_coef);

/// Mean KL(old || current policy) over the batch.
double mean_kl(const nn::GaussianPolicy& policy, const RolloutBatch& batch);

/// Half mean squared error of the value net against batch.ret, and its gradient.
std::pair<double, Eigen::VectorXd> value_loss_gradient(const nn::Mlp& value, const RolloutBatch& batch);

PpoLosses ppo_update(nn::GaussianPolicy& policy, nn::Mlp& value, nn::Adam& policy_opt,
                     nn::Adam& value_opt, const RolloutBatch& batch, const PpoParams& hp, Rng& rng);

class PpoAgent : public OnPolicyAgent {
 public:
  PpoAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng);
  Algorithm algorithm() const override { return Algorithm::kPpo; }
  std::vector<std::string> loss_names() const override;
  const PpoParams& params() const { return hp_; }

 protected:
  UpdateReport update(RolloutBatch& batch, Rng& rng) override;

 private:
  PpoParams hp_;
  nn::Adam policy_opt_;
  nn::Adam value_opt_;
};

}  // namespace rdrl::agents
