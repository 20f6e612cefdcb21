#pragma once

#include "rdrl/agents/cg.hpp"
#include "rdrl/agents/on_policy.hpp"

namespace rdrl::agents {

/// Mean-over-batch Fisher information of the Gaussian policy times `v`, plus
/// damping * v. `cache` holds the mean network's forward pass on the batch.
Eigen::VectorXd fisher_vector_product(const nn::GaussianPolicy& policy, const nn::Mlp::Cache& cache,
                                      const Eigen::VectorXd& v, double damping);

/// Mean importance-weighted advantage under the current policy.
double trpo_surrogate(const nn::GaussianPolicy& policy, const RolloutBatch& batch);

/// One natural-gradient step with KL line search, then value regression.
TrpoStepReport trpo_update(nn::GaussianPolicy& policy, nn::Mlp& value, nn::Adam& value_opt,
                           const RolloutBatch& batch, const TrpoParams& hp, Rng& rng);

class TrpoAgent : public OnPolicyAgent {
 public:
  TrpoAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng);
  Algorithm algorithm() const override { return Algorithm::kTrpo; }
  std::vector<std::string> loss_names() const override;

 protected:
  UpdateReport update(RolloutBatch& batch, Rng& rng) override;

 private:
  TrpoParams hp_;
  nn::Adam value_opt_;
};

}  // namespace rdrl::agents
