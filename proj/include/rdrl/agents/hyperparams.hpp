#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace rdrl::agents {

struct PpoParams {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double policy_lr = 3e-4;
  double value_lr = 1e-3;
  int rollout_steps = 2048;
  int minibatch = 64;
  int epochs = 10;
  double clip = 0.2;
  double entropy_coef = 0.01;
  double kl_stop = 1.0;  // KL(old || new) above this ends the batch early
  double max_grad_norm = 0.5;
  double initial_log_std = -0.5;

  void validate() const;
};

struct TrpoParams {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int rollout_steps = 2048;
  double max_kl = 0.01;
  int cg_iterations = 10;
  double cg_damping = 0.1;
  double line_search_shrink = 0.8;
  int line_search_steps = 10;
  double value_lr = 1e-3;
  int value_epochs = 5;
  int value_minibatch = 64;
  double initial_log_std = -0.5;

  void validate() const;
};

struct DdpgParams {
  double gamma = 0.99;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double tau = 0.005;
  double noise_sigma = 0.1;
  int buffer_capacity = 100000;
  int batch_size = 64;
  int warmup_steps = 1000;  // uniform random actions before learning starts
  int updates_per_step = 1;

  void validate() const;
};

struct Hyperparams {
  std::vector<int> hidden{64, 64};
  PpoParams ppo;
  TrpoParams trpo;
  DdpgParams ddpg;

  void validate() const;
};

nlohmann::json to_json(const Hyperparams& hp);
/// Overlays the keys present in `j` onto `hp`; unknown keys are rejected.
void merge_json(const nlohmann::json& j, Hyperparams& hp, const std::string& context = "hyperparams");

}  // namespace rdrl::agents
