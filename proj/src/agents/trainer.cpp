#include "rdrl/agents/trainer.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rdrl::agents {

void write_curve_header(std::ostream& out, const std::vector<std::string>& loss_names) {
  out << "episode,steps,total_steps,episode_return,mean_reward,cause";
  for (const auto& n : loss_names) out << ',' << n;
  out << '\n';
}

void write_curve_row(std::ostream& out, const EpisodeRecord& r, std::size_t loss_count) {
  out << std::setprecision(10) << r.episode << ',' << r.steps << ',' << r.total_steps << ','
      << r.episode_return << ',' << r.mean_reward << ',' << env::to_string(r.cause);
  for (std::size_t i = 0; i < loss_count; ++i) {
    out << ',';
    if (i < r.losses.size()) out << r.losses[i];
  }
  out << '\n';
}

void write_curve_row(std::ostream& out, const EpisodeRecord& r) {
  write_curve_row(out, r, r.losses.size());
}

nlohmann::json checkpoint_metadata(const TrainConfig& cfg, int episodes_run) {
  env::DrivingEnv probe(cfg.env);
  return {{"format", "rdrl-checkpoint"},
          {"algorithm", std::string(to_string(cfg.algorithm))},
          {"scenario", std::string(env::to_string(cfg.env.scenario))},
          {"observation_size", probe.observation_size()},
          {"observed_vehicles", cfg.env.observed_vehicles},
          {"action_size", env::kActionSize},
          {"seed", cfg.seed},
          {"episodes", episodes_run},
          {"hyperparams", to_json(cfg.hp)}};
}

TrainResult train(const TrainConfig& cfg, const StopCondition& stop, std::ostream* curve_out) {
  if (cfg.episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  env::DrivingEnv env(cfg.env);
  Rng init_rng = make_rng(cfg.seed, "policy-init");
  Rng explore_rng = make_rng(cfg.seed, "exploration");
  Rng update_rng = make_rng(cfg.seed, "update");

  TrainResult result;
  result.agent = make_agent(cfg.algorithm, env.observation_size(), env::kActionSize, cfg.hp, init_rng);
  Agent& agent = *result.agent;
  const auto loss_names = agent.loss_names();
  if (curve_out) write_curve_header(*curve_out, loss_names);

  long total_steps = 0;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    EpisodeRecord rec;
    rec.episode = ep;
    std::vector<double> loss_sum(loss_names.size(), 0.0);
    Eigen::VectorXd obs;
    try {
      obs = env::flatten(env.reset(derive_seed(cfg.seed, "env", static_cast<std::uint64_t>(ep))));
      bool done = false;
      while (!done) {
        Transition t;
        t.obs = obs;
        t.step = agent.act(obs, explore_rng);
        const env::StepResult r = env.step(env::ContinuousAction{t.step.action(0), t.step.action(1)});
        t.reward = r.reward.r_total;
        t.next_obs = env::flatten(r.observation);
        t.terminal = r.terminated && r.cause != env::TerminationCause::kTimeout;
        t.episode_end = r.terminated;
        done = r.terminated;
        rec.cause = r.cause;
        rec.episode_return += t.reward;
        ++rec.steps;
        ++total_steps;
        if (auto report = agent.observe(t, update_rng)) {
          ++rec.updates;
          for (std::size_t i = 0; i < loss_sum.size() && i < report->losses.size(); ++i)
            loss_sum[i] += report->losses[i];
          if (report->trpo) result.trpo_steps.push_back(*report->trpo);
        }
        obs = std::move(t.next_obs);
      }
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "episode " << ep << " (seed " << cfg.seed << "): " << e.what();
      throw std::runtime_error(msg.str());
    }
    rec.total_steps = total_steps;
    rec.mean_reward = rec.steps > 0 ? rec.episode_return / rec.steps : 0.0;
    if (rec.updates > 0)
      for (double s : loss_sum) rec.losses.push_back(s / rec.updates);
    if (curve_out) write_curve_row(*curve_out, rec, loss_names.size());
    result.curve.push_back(std::move(rec));
    if (stop && stop(result.curve)) {
      result.stopped_early = ep + 1 < cfg.episodes;
      break;
    }
  }
  result.checkpoint = agent.checkpoint();
  result.checkpoint.metadata = checkpoint_metadata(cfg, static_cast<int>(result.curve.size()));
  return result;
}

double random_policy_baseline(const env::EnvConfig& cfg, std::uint64_t seed, int episodes) {
  if (episodes <= 0) throw std::invalid_argument("baseline needs at least one episode");
  env::DrivingEnv env(cfg);
  Rng rng = make_rng(seed, "random-baseline");
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  double total = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(derive_seed(seed, "env", static_cast<std::uint64_t>(ep)));
    bool done = false;
    while (!done) {
      const double throttle = uniform(rng);
      const double steer = uniform(rng);
      const auto r = env.step(env::ContinuousAction{throttle, steer});
      total += r.reward.r_total;
      done = r.terminated;
    }
  }
  return total / episodes;
}

double trailing_mean_return(const std::vector<EpisodeRecord>& curve, int window) {
  if (curve.empty() || window <= 0) return 0.0;
  const std::size_t n = std::min<std::size_t>(curve.size(), static_cast<std::size_t>(window));
  double sum = 0.0;
  for (std::size_t i = curve.size() - n; i < curve.size(); ++i) sum += curve[i].episode_return;
  return sum / static_cast<double>(n);
}

}  // namespace rdrl::agents
