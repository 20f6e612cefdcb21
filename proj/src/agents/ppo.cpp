#include "rdrl/agents/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdrl::agents {

SurrogateEval ppo_surrogate(const nn::GaussianPolicy& policy, const RolloutBatch& batch,
                            double clip, double entropy_coef) {
  const Eigen::Index n = batch.size();
  nn::Mlp::Cache cache;
  const Eigen::MatrixXd mean = policy.mean_net().forward(batch.obs, cache);
  const Eigen::RowVectorXd logp = nn::gaussian_log_prob<double>(batch.raw_action, mean, policy.log_std());
  Eigen::RowVectorXd weights(n);
  double total = 0.0;
  int clipped = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ratio = std::exp(logp(i) - batch.log_prob(i));
    const double a = batch.advantage(i);
    const double plain = ratio * a;
    const double limited = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * a;
    total += std::min(plain, limited);
    // the ratio carries gradient only where the unclipped branch is the minimum
    weights(i) = plain <= limited ? plain / static_cast<double>(n) : 0.0;
    if (std::abs(ratio - 1.0) > clip) ++clipped;
  }
  SurrogateEval out;
  out.objective = total / static_cast<double>(n) + entropy_coef * policy.entropy();
  out.gradient = policy.log_prob_gradient(cache, batch.raw_action, weights);
  out.gradient.tail(policy.log_std().size()).array() += entropy_coef;
  out.clip_fraction = static_cast<double>(clipped) / static_cast<double>(n);
  return out;
}

double mean_kl(const nn::GaussianPolicy& policy, const RolloutBatch& batch) {
  const Eigen::MatrixXd mean = policy.mean(batch.obs);
  return nn::gaussian_kl<double>(batch.old_mean, batch.old_log_std, mean, policy.log_std()).mean();
}

std::pair<double, Eigen::VectorXd> value_loss_gradient(const nn::Mlp& value, const RolloutBatch& batch) {
  nn::Mlp::Cache cache;
  const Eigen::MatrixXd v = value.forward(batch.obs, cache);
  const Eigen::MatrixXd diff = v - Eigen::MatrixXd(batch.ret);
  const double n = static_cast<double>(batch.size());
  return {0.5 * diff.squaredNorm() / n, value.backward(cache, diff / n)};
}

PpoLosses ppo_update(nn::GaussianPolicy& policy, nn::Mlp& value, nn::Adam& policy_opt,
                     nn::Adam& value_opt, const RolloutBatch& batch, const PpoParams& hp, Rng& rng) {
  PpoLosses out;
  const Eigen::Index n = batch.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index mb = std::min<Eigen::Index>(hp.minibatch, n);
  int minibatches = 0;
  double policy_sum = 0.0, value_sum = 0.0, clip_sum = 0.0;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += mb) {
      const Eigen::Index stop = std::min(start + mb, n);
      const RolloutBatch part = select(batch, {order.begin() + start, order.begin() + stop});

      SurrogateEval s = ppo_surrogate(policy, part, hp.clip, hp.entropy_coef);
      Eigen::VectorXd g = -s.gradient;
      nn::clip_norm(g, hp.max_grad_norm);
      Eigen::VectorXd params = policy.parameters();
      policy_opt.step(params, g);
      policy.set_parameters(params);

      auto [vloss, vgrad] = value_loss_gradient(value, part);
      nn::clip_norm(vgrad, hp.max_grad_norm);
      Eigen::VectorXd vparams = value.parameters();
      value_opt.step(vparams, vgrad);
      value.set_parameters(vparams);

      policy_sum += -s.objective;
      value_sum += vloss;
      clip_sum += s.clip_fraction;
      ++minibatches;
    }
    out.epochs_run = epoch + 1;
    out.approx_kl = mean_kl(policy, batch);
    if (out.approx_kl > hp.kl_stop) break;
  }
  if (minibatches > 0) {
    out.policy_loss = policy_sum / minibatches;
    out.value_loss = value_sum / minibatches;
    out.clip_fraction = clip_sum / minibatches;
  }
  out.entropy = policy.entropy();
  return out;
}

PpoAgent::PpoAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng)
    : OnPolicyAgent(make_actor_critic(obs_dim, action_dim, hp.hidden, hp.ppo.initial_log_std, init_rng),
                    hp.ppo.rollout_steps, hp.ppo.gamma, hp.ppo.gae_lambda),
      hp_(hp.ppo),
      policy_opt_(nn::AdamConfig{hp.ppo.policy_lr}),
      value_opt_(nn::AdamConfig{hp.ppo.value_lr}) {
  hp_.validate();
}

std::vector<std::string> PpoAgent::loss_names() const {
  return {"policy_loss", "value_loss", "entropy", "approx_kl", "clip_fraction"};
}

UpdateReport PpoAgent::update(RolloutBatch& batch, Rng& rng) {
  const PpoLosses l = ppo_update(nets_.policy, nets_.value, policy_opt_, value_opt_, batch, hp_, rng);
  return {{l.policy_loss, l.value_loss, l.entropy, l.approx_kl, l.clip_fraction}, std::nullopt};
}

}  // namespace rdrl::agents
