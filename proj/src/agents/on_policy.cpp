#include "rdrl/agents/on_policy.hpp"

namespace rdrl::agents {

ActorCritic make_actor_critic(int obs_dim, int action_dim, const std::vector<int>& hidden,
                              double initial_log_std, Rng& rng) {
  std::vector<int> policy_sizes{obs_dim};
  policy_sizes.insert(policy_sizes.end(), hidden.begin(), hidden.end());
  std::vector<int> value_sizes = policy_sizes;
  policy_sizes.push_back(action_dim);
  value_sizes.push_back(1);
  auto mean_net = nn::Mlp::orthogonal(policy_sizes, nn::Activation::kTanh,
                                      nn::Activation::kIdentity, rng, 0.01);
  auto value = nn::Mlp::orthogonal(value_sizes, nn::Activation::kTanh, nn::Activation::kIdentity,
                                   rng, 1.0);
  return {nn::GaussianPolicy(std::move(mean_net), initial_log_std), std::move(value)};
}

OnPolicyAgent::OnPolicyAgent(ActorCritic nets, int rollout_steps, double gamma, double lambda)
    : nets_(std::move(nets)),
      buffer_(nets_.policy.mean_net().input_size(), nets_.policy.action_size(), rollout_steps),
      gamma_(gamma),
      lambda_(lambda) {}

ActStep OnPolicyAgent::act(const Eigen::VectorXd& obs, Rng& rng) {
  ActStep s;
  s.mean = nets_.policy.mean_net().predict(obs);
  s.raw = s.mean;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < s.raw.size(); ++i)
    s.raw(i) += std::exp(nets_.policy.log_std()(i)) * normal(rng);
  s.action = s.raw.array().tanh();
  s.log_prob = nn::gaussian_log_prob<double>(s.raw, s.mean, nets_.policy.log_std());
  s.value = nets_.value.predict(obs)(0);
  return s;
}

Eigen::VectorXd OnPolicyAgent::act_deterministic(const Eigen::VectorXd& obs) const {
  return nets_.policy.mean_net().predict(obs).array().tanh();
}

std::optional<UpdateReport> OnPolicyAgent::observe(const Transition& t, Rng& rng) {
  const double next_value = t.terminal ? 0.0 : nets_.value.predict(t.next_obs)(0);
  buffer_.add(t.obs, t.step.raw, t.step.mean, t.step.log_prob, t.reward, t.step.value, next_value,
              t.episode_end);
  if (!buffer_.full()) return std::nullopt;
  RolloutBatch batch = buffer_.take();
  batch.old_log_std = nets_.policy.log_std();
  compute_gae(batch, gamma_, lambda_);
  normalize_advantages(batch);
  return update(batch, rng);
}

Checkpoint OnPolicyAgent::checkpoint() const {
  Checkpoint c;
  c.add("policy_mean", nets_.policy.mean_net());
  c.add("policy_log_std", nets_.policy.log_std());
  c.add("value", nets_.value);
  return c;
}

void OnPolicyAgent::restore(const Checkpoint& ckpt) {
  nn::Mlp mean = ckpt.mlp("policy_mean");
  Eigen::VectorXd log_std = ckpt.vector("policy_log_std");
  nn::Mlp value = ckpt.mlp("value");
  if (mean.sizes() != nets_.policy.mean_net().sizes() || value.sizes() != nets_.value.sizes() ||
      log_std.size() != nets_.policy.log_std().size())
    throw CheckpointError("checkpoint network shapes do not match the agent");
  nets_.policy.mean_net() = std::move(mean);
  nets_.policy.log_std() = log_std;
  nets_.value = std::move(value);
}

}  // namespace rdrl::agents
