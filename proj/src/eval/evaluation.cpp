#include "rdrl/eval/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdrl::eval {
namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (std::isinf(v[lo]) || std::isinf(v[hi])) return v[hi];
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void check_shape(const agents::Checkpoint& ckpt, const env::EnvConfig& cfg) {
  const env::DrivingEnv probe(cfg);
  const int expected = ckpt.metadata.value("observation_size", -1);
  if (expected != probe.observation_size())
    throw std::invalid_argument("checkpoint expects observations of size " + std::to_string(expected) +
                                " but the environment produces " +
                                std::to_string(probe.observation_size()));
}

}  // namespace

Policy agent_policy(const agents::Agent& agent) {
  return [&agent](const env::DrivingEnv&, const Eigen::VectorXd& obs) {
    const Eigen::VectorXd a = agent.act_deterministic(obs);
    return env::ContinuousAction{a(0), a(1)};
  };
}

MetricReport evaluate_policy(const Policy& policy, const env::EnvConfig& cfg, const EvalOptions& opt) {
  if (opt.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  opt.weights.validate();
  env::DrivingEnv env(cfg);
  MetricReport r;
  r.weights = opt.weights;
  double lane = 0.0, eff = 0.0, comfort = 0.0, energy = 0.0;
  for (int i = 0; i < opt.rounds; ++i) {
    const auto round = static_cast<std::uint64_t>(opt.first_round + i);
    Eigen::VectorXd obs = env::flatten(env.reset(derive_seed(opt.seed, "eval", round)));
    bool done = false;
    while (!done) {
      const auto res = env.step(policy(env, obs));
      lane += std::clamp(res.reward.r_lc, 0.0, 1.0);
      eff += std::clamp(res.reward.r_efficient, 0.0, 1.0);
      comfort += res.reward.r_comfort;
      energy += res.reward.r_energy;
      ++r.total_steps;
      obs = env::flatten(res.observation);
      done = res.terminated;
      if (done) {
        switch (res.cause) {
          case env::TerminationCause::kCollision: ++r.collisions; break;
          case env::TerminationCause::kArrived: ++r.arrivals; break;
          case env::TerminationCause::kOffRoad: ++r.off_road; break;
          case env::TerminationCause::kTimeout: ++r.timeouts; break;
          case env::TerminationCause::kNone: break;
        }
      }
    }
  }
  r.rounds = opt.rounds;
  const double t = static_cast<double>(r.total_steps);
  r.lane_centering = lane / t;
  r.efficiency = eff / t;
  r.comfort = comfort / t;
  r.energy = energy / t;
  r.finalize();
  return r;
}

MetricReport run_evaluation(const agents::Checkpoint& ckpt, const env::EnvConfig& cfg,
                            const EvalOptions& opt) {
  if (opt.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  check_shape(ckpt, cfg);
  const auto agent = agents::agent_from_checkpoint(ckpt);
  return evaluate_policy(agent_policy(*agent), cfg, opt);
}

std::vector<AdaptabilityEntry> adaptability_report(const Policy& policy, const env::EnvConfig& base,
                                                   const std::vector<env::Scenario>& scenarios,
                                                   int rounds, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  std::vector<AdaptabilityEntry> out;
  for (env::Scenario sc : scenarios) {
    env::EnvConfig cfg = base;
    cfg.scenario = sc;
    env::DrivingEnv env(cfg);
    AdaptabilityEntry e;
    e.scenario = std::string(env::to_string(sc));
    e.rounds = rounds;
    double lateral = 0.0, speed = 0.0;
    for (int i = 0; i < rounds; ++i) {
      Eigen::VectorXd obs = env::flatten(env.reset(derive_seed(seed, "adapt", static_cast<std::uint64_t>(i))));
      double min_ttc = std::numeric_limits<double>::infinity();
      road::LaneId lane = env.ego().lane;
      bool done = false;
      while (!done) {
        const auto res = env.step(policy(env, obs));
        lateral += std::abs(res.info.lateral_offset);
        speed += res.info.speed / cfg.speed_limit();
        min_ttc = std::min(min_ttc, res.info.ttc);
        if (res.info.lane != lane) {
          const auto& succ = env.network().lane(lane).successors();
          if (std::find(succ.begin(), succ.end(), res.info.lane) == succ.end()) ++e.lane_changes;
          lane = res.info.lane;
        }
        ++e.steps;
        obs = env::flatten(res.observation);
        done = res.terminated;
        if (res.cause == env::TerminationCause::kCollision) ++e.collisions;
        if (res.cause == env::TerminationCause::kArrived) ++e.arrivals;
      }
      e.min_ttc.push_back(min_ttc);
    }
    e.mean_abs_lateral = lateral / static_cast<double>(e.steps);
    e.mean_speed_ratio = speed / static_cast<double>(e.steps);
    e.min_ttc_p10 = percentile(e.min_ttc, 0.1);
    e.min_ttc_p50 = percentile(e.min_ttc, 0.5);
    e.min_ttc_p90 = percentile(e.min_ttc, 0.9);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<AdaptabilityEntry> adaptability_report(const agents::Checkpoint& ckpt,
                                                   const env::EnvConfig& base,
                                                   const std::vector<env::Scenario>& scenarios,
                                                   int rounds, std::uint64_t seed) {
  check_shape(ckpt, base);
  const auto agent = agents::agent_from_checkpoint(ckpt);
  return adaptability_report(agent_policy(*agent), base, scenarios, rounds, seed);
}

nlohmann::json to_json(const AdaptabilityEntry& e) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json ttc = nlohmann::json::array();
  for (double v : e.min_ttc) ttc.push_back(finite_or_null(v));
  return {{"scenario", e.scenario},
          {"rounds", e.rounds},
          {"steps", e.steps},
          {"mean_abs_lateral_offset", e.mean_abs_lateral},
          {"mean_speed_ratio", e.mean_speed_ratio},
          {"collisions", e.collisions},
          {"arrivals", e.arrivals},
          {"lane_changes", e.lane_changes},
          {"min_ttc_per_round", ttc},
          {"min_ttc_p10", finite_or_null(e.min_ttc_p10)},
          {"min_ttc_p50", finite_or_null(e.min_ttc_p50)},
          {"min_ttc_p90", finite_or_null(e.min_ttc_p90)}};
}

}  // namespace rdrl::eval
