#pragma once

#include <array>

namespace rdrl::reward {

/// Vehicle-specific power (kW/t) for speed v (m/s) and acceleration a (m/s^2),
/// flat road.
double vsp(double v, double a);

struct RewardConfig {
  double ttc_threshold = 3.0;
  std::array<double, 2> safety_weights{0.7, 0.3};             // TTC, lane centering
  std::array<double, 4> total_weights{0.6, 0.25, 0.1, 0.05};  // safe, efficient, comfort, energy
  double v_limit = 10.0;
  double v_max = 20.0;
  double a_max = 5.0;
  double r_ttc_floor = -10.0;
  double r_lc_floor = -1.0;

  /// Specific power at full speed and full throttle.
  double vsp_max() const { return vsp(v_max, a_max); }
  void validate() const;
};

struct RewardBreakdown {
  double r_lc = 0.0;
  double r_ttc = 0.0;
  double r_safe = 0.0;
  double r_efficient = 0.0;
  double r_comfort = 0.0;
  double r_energy = 0.0;
  double r_arrive = 0.0;
  double r_total = 0.0;
  double vsp = 0.0;
};

/// Per-decision inputs the environment gathers for the reward.
struct RewardInputs {
  double lateral_offset = 0.0;
  double lane_width = 4.0;
  double ttc = 0.0;
  double speed = 0.0;
  double throttle = 0.0;
  double prev_throttle = 0.0;
  double steer = 0.0;
  double prev_steer = 0.0;
  bool arrived = false;
};

double lane_centering_reward(double lateral, double lane_width, double floor = -1.0);
double ttc_reward(double ttc, double threshold = 3.0, double floor = -10.0);
double safety_reward(double r_ttc, double r_lc, double w_ttc = 0.7, double w_lc = 0.3);
double efficiency_reward(double v_ego, double v_limit, double v_max);
double comfort_reward(double throttle, double prev_throttle, double steer, double prev_steer);
double energy_reward(double vsp_value, double vsp_max);
double arrival_reward(bool arrived);

/// Weighted sum of already-computed sub-rewards; fills r_total in place.
RewardBreakdown total_reward(RewardBreakdown parts, const RewardConfig& cfg = {});

/// Full per-step evaluation: every sub-reward plus the weighted total.
RewardBreakdown compute_reward(const RewardInputs& in, const RewardConfig& cfg);

}  // namespace rdrl::reward
