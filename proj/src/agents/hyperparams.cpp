#include "rdrl/agents/hyperparams.hpp"

#include <stdexcept>

#include "rdrl/common/strict_json.hpp"

namespace rdrl::agents {
namespace {

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

void check_discount(double gamma, double lambda) {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "gae_lambda must lie in [0, 1]");
}

}  // namespace

void PpoParams::validate() const {
  check_discount(gamma, gae_lambda);
  require(policy_lr > 0 && value_lr > 0, "ppo learning rates must be positive");
  require(rollout_steps > 0 && minibatch > 0 && epochs > 0, "ppo batch sizes must be positive");
  require(clip > 0.0 && clip < 1.0, "ppo clip must lie in (0, 1)");
  require(entropy_coef >= 0.0, "ppo entropy_coef must be >= 0");
  require(kl_stop > 0.0, "ppo kl_stop must be positive");
}

void TrpoParams::validate() const {
  check_discount(gamma, gae_lambda);
  require(rollout_steps > 0, "trpo rollout_steps must be positive");
  require(max_kl > 0.0, "trpo max_kl must be positive");
  require(cg_iterations > 0, "trpo cg_iterations must be positive");
  require(cg_damping >= 0.0, "trpo cg_damping must be >= 0");
  require(line_search_shrink > 0.0 && line_search_shrink < 1.0,
          "trpo line_search_shrink must lie in (0, 1)");
  require(line_search_steps > 0, "trpo line_search_steps must be positive");
  require(value_lr > 0 && value_epochs > 0 && value_minibatch > 0,
          "trpo value fitting parameters must be positive");
}

void DdpgParams::validate() const {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(actor_lr > 0 && critic_lr > 0, "ddpg learning rates must be positive");
  require(tau > 0.0 && tau <= 1.0, "ddpg tau must lie in (0, 1]");
  require(noise_sigma >= 0.0, "ddpg noise_sigma must be >= 0");
  require(buffer_capacity > 0 && batch_size > 0 && batch_size <= buffer_capacity,
          "ddpg buffer_capacity and batch_size must be positive, batch <= capacity");
  require(warmup_steps >= 0 && updates_per_step > 0, "ddpg warmup/updates must be valid");
}

void Hyperparams::validate() const {
  require(!hidden.empty(), "hidden layer list must not be empty");
  for (int h : hidden) require(h > 0, "hidden layer sizes must be positive");
  ppo.validate();
  trpo.validate();
  ddpg.validate();
}

nlohmann::json to_json(const Hyperparams& hp) {
  const auto& p = hp.ppo;
  const auto& t = hp.trpo;
  const auto& d = hp.ddpg;
  return {
      {"hidden", hp.hidden},
      {"ppo",
       {{"gamma", p.gamma}, {"gae_lambda", p.gae_lambda}, {"policy_lr", p.policy_lr},
        {"value_lr", p.value_lr}, {"rollout_steps", p.rollout_steps}, {"minibatch", p.minibatch},
        {"epochs", p.epochs}, {"clip", p.clip}, {"entropy_coef", p.entropy_coef},
        {"kl_stop", p.kl_stop}, {"max_grad_norm", p.max_grad_norm},
        {"initial_log_std", p.initial_log_std}}},
      {"trpo",
       {{"gamma", t.gamma}, {"gae_lambda", t.gae_lambda}, {"rollout_steps", t.rollout_steps},
        {"max_kl", t.max_kl}, {"cg_iterations", t.cg_iterations}, {"cg_damping", t.cg_damping},
        {"line_search_shrink", t.line_search_shrink}, {"line_search_steps", t.line_search_steps},
        {"value_lr", t.value_lr}, {"value_epochs", t.value_epochs},
        {"value_minibatch", t.value_minibatch}, {"initial_log_std", t.initial_log_std}}},
      {"ddpg",
       {{"gamma", d.gamma}, {"actor_lr", d.actor_lr}, {"critic_lr", d.critic_lr}, {"tau", d.tau},
        {"noise_sigma", d.noise_sigma}, {"buffer_capacity", d.buffer_capacity},
        {"batch_size", d.batch_size}, {"warmup_steps", d.warmup_steps},
        {"updates_per_step", d.updates_per_step}}},
  };
}

void merge_json(const nlohmann::json& j, Hyperparams& hp, const std::string& context) {
  StrictObject o(j, context);
  o.get("hidden", hp.hidden);
  if (const auto* c = o.child("ppo")) {
    StrictObject s(*c, o.path("ppo"));
    auto& p = hp.ppo;
    s.get("gamma", p.gamma);
    s.get("gae_lambda", p.gae_lambda);
    s.get("policy_lr", p.policy_lr);
    s.get("value_lr", p.value_lr);
    s.get("rollout_steps", p.rollout_steps);
    s.get("minibatch", p.minibatch);
    s.get("epochs", p.epochs);
    s.get("clip", p.clip);
    s.get("entropy_coef", p.entropy_coef);
    s.get("kl_stop", p.kl_stop);
    s.get("max_grad_norm", p.max_grad_norm);
    s.get("initial_log_std", p.initial_log_std);
    s.finish();
  }
  if (const auto* c = o.child("trpo")) {
    StrictObject s(*c, o.path("trpo"));
    auto& t = hp.trpo;
    s.get("gamma", t.gamma);
    s.get("gae_lambda", t.gae_lambda);
    s.get("rollout_steps", t.rollout_steps);
    s.get("max_kl", t.max_kl);
    s.get("cg_iterations", t.cg_iterations);
    s.get("cg_damping", t.cg_damping);
    s.get("line_search_shrink", t.line_search_shrink);
    s.get("line_search_steps", t.line_search_steps);
    s.get("value_lr", t.value_lr);
    s.get("value_epochs", t.value_epochs);
    s.get("value_minibatch", t.value_minibatch);
    s.get("initial_log_std", t.initial_log_std);
    s.finish();
  }
  if (const auto* c = o.child("ddpg")) {
    StrictObject s(*c, o.path("ddpg"));
    auto& d = hp.ddpg;
    s.get("gamma", d.gamma);
    s.get("actor_lr", d.actor_lr);
    s.get("critic_lr", d.critic_lr);
    s.get("tau", d.tau);
    s.get("noise_sigma", d.noise_sigma);
    s.get("buffer_capacity", d.buffer_capacity);
    s.get("batch_size", d.batch_size);
    s.get("warmup_steps", d.warmup_steps);
    s.get("updates_per_step", d.updates_per_step);
    s.finish();
  }
  o.finish();
}

}  // namespace rdrl::agents
