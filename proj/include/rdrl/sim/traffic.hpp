#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rdrl/road/geometry.hpp"

namespace rdrl::sim {

using road::LaneId;
using road::Vec2;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct VehicleState {
  Vec2 position = Vec2::Zero();
  double speed = 0.0;
  double heading = 0.0;
  double length = 5.0;
  double width = 2.0;
  LaneId lane = road::kNoLane;
  double last_throttle = 0.0;
  double last_steer = 0.0;
  bool present = true;

  Vec2 velocity() const;
};

struct DynamicsConfig {
  double v_max = 20.0;
  double a_max = 5.0;
  double max_steer = 0.6;  // front-wheel angle at |steer| = 1, rad
  double wheelbase = 2.5;
  double sim_dt = 1.0 / 15.0;
  double decisions_per_second = 5.0;

  /// Simulation sub-steps per decision; throws unless the ratio is integral.
  int substeps() const;
  void validate() const;
};

struct IdmParams {
  double desired_speed = 10.0;
  double time_headway = 1.5;
  double min_gap = 6.0;
  double accel = 3.0;
  double decel = 5.0;
  double exponent = 4.0;

  void validate() const;
};

/// Proportional lane-tracking gains for scripted drivers.
struct LateralGains {
  double k_d = 0.2;  // rad per metre of lateral offset
  double k_h = 1.0;  // rad per rad of heading error
};

struct Controls {
  double throttle = 0.0;
  double steer = 0.0;
};

/// One explicit-Euler step of the kinematic bicycle model. Positive steer
/// increases heading (counter-clockwise in the world frame).
VehicleState step_kinematics(const VehicleState& state, double throttle, double steer,
                             const DynamicsConfig& cfg);

/// Intelligent Driver Model acceleration. `gap` is bumper-to-bumper distance;
/// pass kInfinity when there is no leader.
double idm_acceleration(double speed, double gap, double lead_speed, const IdmParams& p);

std::array<Vec2, 4> footprint(const VehicleState& v);

/// Oriented-rectangle overlap by separating axes.
bool detect_collision(const VehicleState& a, const VehicleState& b);

/// Lanes ahead of `lane`: the remainder of `route` when `lane` is on it,
/// otherwise the first-successor chain. Stops once `horizon` metres are covered.
std::vector<LaneId> lane_path(const road::RoadNetwork& network, LaneId lane,
                              std::span<const LaneId> route, double horizon);

struct PathPosition {
  double s = 0.0;        // arc length along the path
  double tangent = 0.0;  // lane heading at that point
};

/// First lane of `path` whose half-width band contains `point`.
std::optional<PathPosition> locate_on_path(const road::RoadNetwork& network,
                                           std::span<const LaneId> path, const Vec2& point);

struct Leader {
  double gap = kInfinity;
  double speed = 0.0;
};

/// Closest vehicle ahead of `self` along `path` (path[0] is self's lane).
Leader find_leader(const VehicleState& self, std::span<const LaneId> path,
                   const road::RoadNetwork& network, std::span<const VehicleState> others,
                   double horizon);

inline constexpr double kTtcHorizon = 60.0;

/// Time to collision against vehicles ahead on ego's lane and the lanes that
/// follow it (route continuation when given). kInfinity when nothing closes.
double time_to_collision(const VehicleState& ego, std::span<const VehicleState> others,
                         const road::RoadNetwork& network, std::span<const LaneId> route = {});

struct AmbientVehicle {
  VehicleState state;
  std::vector<LaneId> route;
  std::size_t route_index = 0;
  IdmParams idm;
};

/// Moves `route_index` forward once the vehicle passes the end of its current
/// route lane. Marks the vehicle absent after the last lane.
void advance_route(AmbientVehicle& vehicle, const road::RoadNetwork& network);

/// Steering that tracks a lane centerline: curvature feed-forward plus a
/// proportional correction on lateral offset and heading error.
double lane_tracking_steer(const road::Lane& lane, const VehicleState& vehicle,
                           const DynamicsConfig& dyn, const LateralGains& gains);

/// IDM along the route (yielding at merges into a lane fed by other lanes)
/// plus lane tracking on the current route lane.
Controls ambient_policy(const AmbientVehicle& vehicle, const road::RoadNetwork& network,
                        std::span<const VehicleState> neighbors, const DynamicsConfig& dyn,
                        const LateralGains& gains = {});

}  // namespace rdrl::sim
