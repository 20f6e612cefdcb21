#include "rdrl/reward/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdrl::reward {

double vsp(double v, double a) { return v * (1.1 * a + 0.132) + 0.000302 * v * v * v; }

void RewardConfig::validate() const {
  if (!(v_limit > 0.0) || !(v_max > v_limit))
    throw std::invalid_argument("reward config requires 0 < v_limit < v_max");
  if (!(a_max > 0.0)) throw std::invalid_argument("reward config requires a_max > 0");
  if (!(vsp_max() > 0.0)) throw std::invalid_argument("vsp_max must be positive");
  if (!(ttc_threshold > 0.0)) throw std::invalid_argument("ttc threshold must be positive");
  const double sum =
      total_weights[0] + total_weights[1] + total_weights[2] + total_weights[3];
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("total reward weights must sum to 1");
}

double lane_centering_reward(double lateral, double lane_width, double floor) {
  const double ratio = lateral / (lane_width / 2.0);
  return std::max(1.0 - ratio * ratio, floor);
}

double ttc_reward(double ttc, double threshold, double floor) {
  if (std::isinf(ttc)) return 1.0;
  if (ttc <= 0.0) return floor;
  return std::clamp(1.0 - threshold / ttc, floor, 1.0);
}

double safety_reward(double r_ttc, double r_lc, double w_ttc, double w_lc) {
  return w_ttc * r_ttc + w_lc * r_lc;
}

double efficiency_reward(double v_ego, double v_limit, double v_max) {
  if (!(v_limit < v_max)) throw std::invalid_argument("v_limit must be below v_max");
  if (v_ego <= v_limit) return v_ego / v_limit;
  return 1.0 - (v_ego - v_limit) / (v_max - v_limit);
}

double comfort_reward(double throttle, double prev_throttle, double steer, double prev_steer) {
  const double diff_throttle = std::abs(throttle - prev_throttle);
  const double diff_steering = std::abs(steer - prev_steer);
  return 1.0 - (diff_throttle + diff_steering) / 4.0;
}

double energy_reward(double vsp_value, double vsp_max) {
  return 1.0 - std::clamp(vsp_value, 0.0, vsp_max) / vsp_max;
}

double arrival_reward(bool arrived) { return arrived ? 1.0 : 0.0; }

RewardBreakdown total_reward(RewardBreakdown parts, const RewardConfig& cfg) {
  const auto& w = cfg.total_weights;
  parts.r_total = w[0] * parts.r_safe + w[1] * parts.r_efficient + w[2] * parts.r_comfort +
                  w[3] * parts.r_energy + parts.r_arrive;
  return parts;
}

RewardBreakdown compute_reward(const RewardInputs& in, const RewardConfig& cfg) {
  RewardBreakdown out;
  out.r_lc = lane_centering_reward(in.lateral_offset, in.lane_width, cfg.r_lc_floor);
  out.r_ttc = ttc_reward(in.ttc, cfg.ttc_threshold, cfg.r_ttc_floor);
  out.r_safe = safety_reward(out.r_ttc, out.r_lc, cfg.safety_weights[0], cfg.safety_weights[1]);
  out.r_efficient = efficiency_reward(in.speed, cfg.v_limit, cfg.v_max);
  out.r_comfort = comfort_reward(in.throttle, in.prev_throttle, in.steer, in.prev_steer);
  // commanded acceleration at the decision step
  out.vsp = vsp(in.speed, in.throttle * cfg.a_max);
  out.r_energy = energy_reward(out.vsp, cfg.vsp_max());
  out.r_arrive = arrival_reward(in.arrived);
  return total_reward(out, cfg);
}

}  // namespace rdrl::reward
