#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdrl/common/random.hpp"
#include "rdrl/reward/reward.hpp"
#include "rdrl/road/geometry.hpp"
#include "rdrl/sim/traffic.hpp"

namespace rdrl::env {

enum class Scenario { kRoundabout, kHighway, kMerge };

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view name);

inline constexpr int kFeatureCount = 7;
inline constexpr int kActionSize = 2;

/// Rows: ego, then the K nearest vehicles. Columns: presence, x, y, v_x, v_y,
/// lane heading difference, lane distance; all but presence scaled into [-1, 1].
using Observation = Eigen::Matrix<double, Eigen::Dynamic, kFeatureCount, Eigen::RowMajor>;

/// Row-major flattening used as network input.
inline Eigen::VectorXd flatten(const Observation& obs) {
  return Eigen::Map<const Eigen::VectorXd>(obs.data(), obs.size());
}

struct ContinuousAction {
  double throttle = 0.0;
  double steer = 0.0;
};

enum class MetaAction { kLaneLeft, kIdle, kLaneRight, kFaster, kSlower };

enum class TerminationCause { kNone, kCollision, kArrived, kTimeout, kOffRoad };

std::string_view to_string(TerminationCause cause);

struct StepInfo {
  double time = 0.0;
  double ttc = sim::kInfinity;
  double lateral_offset = 0.0;
  double speed = 0.0;
  double vsp = 0.0;
  double throttle = 0.0;
  double steer = 0.0;
  road::Vec2 position = road::Vec2::Zero();
  road::LaneId lane = road::kNoLane;
};

struct StepResult {
  Observation observation;
  reward::RewardBreakdown reward;
  bool terminated = false;
  TerminationCause cause = TerminationCause::kNone;
  StepInfo info;
};

struct GeometryConfig {
  road::RoundaboutConfig roundabout;
  road::HighwayConfig highway;
  road::MergeConfig merge;
};

struct EnvConfig {
  Scenario scenario = Scenario::kRoundabout;
  GeometryConfig geometry;
  sim::DynamicsConfig dynamics;
  sim::IdmParams idm;
  sim::LateralGains ambient_gains;
  // v_limit, v_max and a_max are filled from the scenario and dynamics.
  reward::RewardConfig reward;
  int ambient_vehicles = 5;
  int observed_vehicles = 5;
  double episode_seconds = 60.0;
  double off_road_factor = 2.0;      // times the lane width
  double ego_spawn_distance = 40.0;  // m along the entry lane
  double ego_speed_ratio = 0.8;      // initial speed over the speed limit
  double spawn_clearance = 12.0;     // m between spawned vehicle centers
  double position_scale = 100.0;
  double meta_speed_step = 5.0;

  void validate() const;
  double speed_limit() const;
};

road::RoadNetwork build_network(const EnvConfig& cfg);

class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DrivingEnv {
 public:
  explicit DrivingEnv(EnvConfig cfg);

  const EnvConfig& config() const { return cfg_; }
  const road::RoadNetwork& network() const { return network_; }
  int observation_rows() const { return 1 + cfg_.observed_vehicles; }
  int observation_size() const { return observation_rows() * kFeatureCount; }

  Observation reset(std::uint64_t seed);
  StepResult step(const ContinuousAction& action);
  StepResult step(MetaAction action);
  Observation observe() const;

  const sim::VehicleState& ego() const { return ego_; }
  const std::vector<sim::AmbientVehicle>& ambient() const { return ambient_; }
  const std::vector<road::LaneId>& ego_route() const { return route_; }
  int target_leg() const { return target_leg_; }
  double time() const { return time_; }
  int steps() const { return steps_; }
  bool terminated() const { return terminated_; }

  /// Scripted world edits, for tests and demonstrations.
  void place_ego(const sim::VehicleState& state);
  void add_ambient(sim::AmbientVehicle vehicle);
  void clear_ambient() { ambient_.clear(); }

  /// Centerline-following action along the ego's route at `target_speed`.
  ContinuousAction route_following_action(double target_speed) const;

 private:
  void spawn_ego(Rng& rng);
  void spawn_ambient(Rng& rng);
  bool clear_of_others(const road::Vec2& p) const;
  void update_ego_lane();
  road::LaneFrame ego_frame() const;
  std::vector<sim::VehicleState> others_of(std::size_t ambient_index) const;
  std::vector<sim::VehicleState> present_ambient() const;
  ContinuousAction meta_to_continuous(MetaAction action);

  EnvConfig cfg_;
  road::RoadNetwork network_;
  sim::VehicleState ego_;
  std::vector<sim::AmbientVehicle> ambient_;
  std::vector<road::LaneId> route_;
  int target_leg_ = 0;
  double time_ = 0.0;
  int steps_ = 0;
  bool reset_done_ = false;
  bool terminated_ = false;
  bool first_decision_ = true;
  double meta_target_speed_ = 0.0;
  road::LaneId meta_target_lane_ = road::kNoLane;
};

/// Fixed trace column list: t, x, y, speed, throttle, steer, every sub-reward,
/// the total, and TTC.
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const StepResult& step);

}  // namespace rdrl::env
