#include "rdrl/agents/ddpg.hpp"

#include <cmath>
#include <sstream>

namespace rdrl::agents {

DdpgNets make_ddpg_nets(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng) {
  std::vector<int> actor_sizes{obs_dim};
  actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
  actor_sizes.push_back(action_dim);
  std::vector<int> critic_sizes{obs_dim + action_dim};
  critic_sizes.insert(critic_sizes.end(), hidden.begin(), hidden.end());
  critic_sizes.push_back(1);
  DdpgNets nets;
  nets.actor = nn::Mlp::orthogonal(actor_sizes, nn::Activation::kTanh, nn::Activation::kTanh, rng, 0.01);
  nets.critic = nn::Mlp::orthogonal(critic_sizes, nn::Activation::kTanh, nn::Activation::kIdentity, rng, 1.0);
  nets.actor_target = nets.actor;
  nets.critic_target = nets.critic;
  return nets;
}

void soft_update(nn::Mlp& target, const nn::Mlp& online, double tau) {
  target.set_parameters(tau * online.parameters() + (1.0 - tau) * target.parameters());
}

namespace {

Eigen::MatrixXd stack(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& action) {
  Eigen::MatrixXd x(obs.rows() + action.rows(), obs.cols());
  x << obs, action;
  return x;
}

}  // namespace

Eigen::RowVectorXd critic_targets(const DdpgNets& nets, const ReplayBatch& batch, double gamma) {
  const Eigen::MatrixXd next_action = nets.actor_target.predict(batch.next_obs);
  const Eigen::RowVectorXd next_q = nets.critic_target.predict(stack(batch.next_obs, next_action));
  return batch.reward.array() + gamma * (1.0 - batch.done.array()) * next_q.array();
}

DdpgLosses ddpg_update(DdpgNets& nets, nn::Adam& actor_opt, nn::Adam& critic_opt,
                       const ReplayBatch& batch, const DdpgParams& hp) {
  const double n = static_cast<double>(batch.reward.size());
  DdpgLosses out;

  const Eigen::RowVectorXd y = critic_targets(nets, batch, hp.gamma);
  nn::Mlp::Cache ccache;
  const Eigen::MatrixXd q = nets.critic.forward(stack(batch.obs, batch.action), ccache);
  const Eigen::MatrixXd diff = q - Eigen::MatrixXd(y);
  out.critic_loss = 0.5 * diff.squaredNorm() / n;
  Eigen::VectorXd cparams = nets.critic.parameters();
  critic_opt.step(cparams, nets.critic.backward(ccache, diff / n));
  nets.critic.set_parameters(cparams);

  nn::Mlp::Cache acache, qcache;
  const Eigen::MatrixXd action = nets.actor.forward(batch.obs, acache);
  const Eigen::MatrixXd q_pi = nets.critic.forward(stack(batch.obs, action), qcache);
  out.mean_q = q_pi.mean();
  out.actor_loss = -out.mean_q;
  Eigen::MatrixXd dq_dx;
  nets.critic.backward(qcache, Eigen::MatrixXd::Constant(1, q_pi.cols(), -1.0 / n), &dq_dx);
  const Eigen::MatrixXd dq_da = dq_dx.bottomRows(action.rows());
  Eigen::VectorXd aparams = nets.actor.parameters();
  actor_opt.step(aparams, nets.actor.backward(acache, dq_da));
  nets.actor.set_parameters(aparams);

  if (!std::isfinite(out.critic_loss) || !std::isfinite(out.actor_loss)) {
    std::ostringstream msg;
    msg << "ddpg: non-finite loss (critic " << out.critic_loss << ", actor " << out.actor_loss
        << ", mean target " << y.mean() << ")";
    throw std::domain_error(msg.str());
  }

  soft_update(nets.actor_target, nets.actor, hp.tau);
  soft_update(nets.critic_target, nets.critic, hp.tau);
  return out;
}

DdpgAgent::DdpgAgent(int obs_dim, int action_dim, const Hyperparams& hp, Rng& init_rng)
    : hp_(hp.ddpg),
      nets_(make_ddpg_nets(obs_dim, action_dim, hp.hidden, init_rng)),
      actor_opt_(nn::AdamConfig{hp.ddpg.actor_lr}),
      critic_opt_(nn::AdamConfig{hp.ddpg.critic_lr}),
      buffer_(hp.ddpg.buffer_capacity, obs_dim, action_dim) {
  hp_.validate();
}

std::vector<std::string> DdpgAgent::loss_names() const {
  return {"critic_loss", "actor_loss", "mean_q"};
}

ActStep DdpgAgent::act(const Eigen::VectorXd& obs, Rng& rng) {
  ActStep s;
  const Eigen::Index dim = nets_.actor.output_size();
  if (steps_ < hp_.warmup_steps) {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    s.action.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) s.action(i) = uniform(rng);
  } else {
    std::normal_distribution<double> normal(0.0, hp_.noise_sigma);
    s.action = nets_.actor.predict(obs);
    for (Eigen::Index i = 0; i < dim; ++i) s.action(i) = std::clamp(s.action(i) + normal(rng), -1.0, 1.0);
  }
  s.raw = s.action;
  return s;
}

Eigen::VectorXd DdpgAgent::act_deterministic(const Eigen::VectorXd& obs) const {
  return nets_.actor.predict(obs);
}

std::optional<UpdateReport> DdpgAgent::observe(const Transition& t, Rng& rng) {
  buffer_.add(t.obs, t.step.action, t.reward, t.next_obs, t.terminal);
  ++steps_;
  if (buffer_.size() < std::max(hp_.batch_size, hp_.warmup_steps)) return std::nullopt;
  UpdateReport report;
  report.losses.assign(3, 0.0);
  for (int k = 0; k < hp_.updates_per_step; ++k) {
    const DdpgLosses l = ddpg_update(nets_, actor_opt_, critic_opt_, buffer_.sample(hp_.batch_size, rng), hp_);
    report.losses[0] += l.critic_loss / hp_.updates_per_step;
    report.losses[1] += l.actor_loss / hp_.updates_per_step;
    report.losses[2] += l.mean_q / hp_.updates_per_step;
  }
  return report;
}

Checkpoint DdpgAgent::checkpoint() const {
  Checkpoint c;
  c.add("actor", nets_.actor);
  c.add("critic", nets_.critic);
  c.add("actor_target", nets_.actor_target);
  c.add("critic_target", nets_.critic_target);
  return c;
}

void DdpgAgent::restore(const Checkpoint& ckpt) {
  DdpgNets loaded{ckpt.mlp("actor"), ckpt.mlp("critic"), ckpt.mlp("actor_target"),
                  ckpt.mlp("critic_target")};
  if (loaded.actor.sizes() != nets_.actor.sizes() || loaded.critic.sizes() != nets_.critic.sizes())
    throw CheckpointError("checkpoint network shapes do not match the agent");
  nets_ = std::move(loaded);
}

}  // namespace rdrl::agents
