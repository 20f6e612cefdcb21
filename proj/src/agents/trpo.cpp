#include "rdrl/agents/trpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdrl/agents/ppo.hpp"

namespace rdrl::agents {

Eigen::VectorXd fisher_vector_product(const nn::GaussianPolicy& policy, const nn::Mlp::Cache& cache,
                                      const Eigen::VectorXd& v, double damping) {
  const auto& net = policy.mean_net();
  const Eigen::Index n_net = net.parameter_count();
  const Eigen::Index n_std = policy.log_std().size();
  if (v.size() != n_net + n_std) throw nn::ShapeError("fisher_vector_product: size mismatch");
  const double batch = static_cast<double>(cache.activations.front().cols());
  const Eigen::ArrayXd inv_var = (-2.0 * policy.log_std().array()).exp();

  // Gauss-Newton form: J^T diag(1/sigma^2) J for the mean, 2 I for log_std.
  Eigen::MatrixXd jv = net.jvp(cache, v.head(n_net));
  jv.array().colwise() *= inv_var;
  Eigen::VectorXd out(v.size());
  out.head(n_net) = net.backward(cache, jv / batch);
  out.tail(n_std) = 2.0 * v.tail(n_std);
  return out + damping * v;
}

double trpo_surrogate(const nn::GaussianPolicy& policy, const RolloutBatch& batch) {
  const Eigen::RowVectorXd logp = policy.log_prob(batch.obs, batch.raw_action);
  return ((logp - batch.log_prob).array().exp() * batch.advantage.array()).mean();
}

namespace {

double fit_value(nn::Mlp& value, nn::Adam& opt, const RolloutBatch& batch, const TrpoParams& hp,
                 Rng& rng) {
  const Eigen::Index n = batch.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index mb = std::min<Eigen::Index>(hp.value_minibatch, n);
  double last = 0.0;
  for (int epoch = 0; epoch < hp.value_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index start = 0; start < n; start += mb) {
      const Eigen::Index stop = std::min(start + mb, n);
      const RolloutBatch part = select(batch, {order.begin() + start, order.begin() + stop});
      auto [loss, grad] = value_loss_gradient(value, part);
      Eigen::VectorXd params = value.parameters();
      opt.step(params, grad);
      value.set_parameters(params);
      sum += loss;
      ++count;
    }
    last = sum / std::max(count, 1);
  }
  return last;
}

}  // namespace

TrpoStepReport trpo_update(nn::GaussianPolicy& policy, nn::Mlp& value, nn::Adam& value_opt,
                           const RolloutBatch& batch, const TrpoParams& hp, Rng& rng) {
  TrpoStepReport report;
  const Eigen::Index n = batch.size();
  const Eigen::VectorXd theta0 = policy.parameters();

  nn::Mlp::Cache cache;
  policy.mean_net().forward(batch.obs, cache);
  const Eigen::RowVectorXd weights = batch.advantage / static_cast<double>(n);
  const Eigen::VectorXd g = policy.log_prob_gradient(cache, batch.raw_action, weights);
  report.surrogate_before = trpo_surrogate(policy, batch);
  report.surrogate_after = report.surrogate_before;

  if (!g.allFinite()) throw std::domain_error("trpo: non-finite policy gradient");
  if (g.norm() < 1e-12) {
    report.zero_gradient = true;
  } else {
    auto fvp = [&](const Eigen::VectorXd& v) {
      return fisher_vector_product(policy, cache, v, hp.cg_damping);
    };
    auto cg = conjugate_gradient<double>(fvp, g, hp.cg_iterations);
    Eigen::VectorXd x = cg.x;
    report.cg_breakdown = cg.breakdown;
    if (cg.breakdown || !x.allFinite() || x.norm() == 0.0) x = g;
    double shs = x.dot(fvp(x));
    if (!(shs > 0.0)) {
      report.cg_breakdown = true;
      x = g;
      shs = x.dot(fvp(x));
    }
    const Eigen::VectorXd full_step = std::sqrt(2.0 * hp.max_kl / shs) * x;
    report.expected_improvement = g.dot(full_step);

    double fraction = 1.0;
    for (int k = 0; k < hp.line_search_steps; ++k, fraction *= hp.line_search_shrink) {
      policy.set_parameters(theta0 + fraction * full_step);
      const double kl = mean_kl(policy, batch);
      const double surr = trpo_surrogate(policy, batch);
      if (std::isfinite(surr) && kl <= hp.max_kl && surr > report.surrogate_before) {
        report.accepted = true;
        report.backtracks = k;
        report.surrogate_after = surr;
        break;
      }
    }
    if (!report.accepted) {
      policy.set_parameters(theta0);
      report.backtracks = hp.line_search_steps;
    }
  }
  report.kl = mean_kl(policy, batch);
  report.value_loss = fit_value(value, value_opt, batch, hp, rng);
  return report;
}

TrpoAgent::TrpoAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng)
    : OnPolicyAgent(make_actor_critic(obs_dim, action_dim, hp.hidden, hp.trpo.initial_log_std, init_rng),
                    hp.trpo.rollout_steps, hp.trpo.gamma, hp.trpo.gae_lambda),
      hp_(hp.trpo),
      value_opt_(nn::AdamConfig{hp.trpo.value_lr}) {
  hp_.validate();
}

std::vector<std::string> TrpoAgent::loss_names() const {
  return {"surrogate_gain", "kl", "accepted", "backtracks", "value_loss"};
}

UpdateReport TrpoAgent::update(RolloutBatch& batch, Rng& rng) {
  const TrpoStepReport r = trpo_update(nets_.policy, nets_.value, value_opt_, batch, hp_, rng);
  return {{r.surrogate_after - r.surrogate_before, r.kl, r.accepted ? 1.0 : 0.0,
           static_cast<double>(r.backtracks), r.value_loss},
          r};
}

}  // namespace rdrl::agents
