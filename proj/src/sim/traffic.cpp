#include "rdrl/sim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdrl::sim {
namespace {

constexpr std::size_t kMaxPathLanes = 32;
constexpr double kYieldZone = 25.0;     // distance to the junction where yielding starts
constexpr double kYieldTimeGap = 3.0;   // s, conflicting arrival window
constexpr double kStopStandoff = 1.0;   // m short of the junction
constexpr double kMinStoppingGap = 2.0; // closer than this, commit instead of yielding

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}

bool separated_on(const Vec2& axis, const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
  double amin = a[0].dot(axis), amax = amin;
  double bmin = b[0].dot(axis), bmax = bmin;
  for (int i = 1; i < 4; ++i) {
    const double pa = a[i].dot(axis);
    const double pb = b[i].dot(axis);
    amin = std::min(amin, pa);
    amax = std::max(amax, pa);
    bmin = std::min(bmin, pb);
    bmax = std::max(bmax, pb);
  }
  return amax < bmin || bmax < amin;
}

}  // namespace

Vec2 VehicleState::velocity() const {
  return speed * Vec2(std::cos(heading), std::sin(heading));
}

int DynamicsConfig::substeps() const {
  const double ratio = 1.0 / (sim_dt * decisions_per_second);
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9)
    throw std::invalid_argument(
        "simulation frequency must be an integer multiple of the decision frequency");
  return static_cast<int>(rounded);
}

void DynamicsConfig::validate() const {
  for (double v : {v_max, a_max, max_steer, wheelbase, sim_dt, decisions_per_second})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("dynamics parameters must be positive");
  (void)substeps();
}

void IdmParams::validate() const {
  for (double v : {desired_speed, time_headway, min_gap, accel, decel, exponent})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("IDM parameters must be positive");
}

VehicleState step_kinematics(const VehicleState& state, double throttle, double steer,
                             const DynamicsConfig& cfg) {
  require_finite(throttle, "throttle");
  require_finite(steer, "steer");
  require_finite(state.speed, "speed");
  require_finite(state.heading, "heading");
  throttle = std::clamp(throttle, -1.0, 1.0);
  steer = std::clamp(steer, -1.0, 1.0);

  const double accel = throttle * cfg.a_max;
  const double steer_angle = steer * cfg.max_steer;
  const double slip = std::atan(0.5 * std::tan(steer_angle));
  const double dt = cfg.sim_dt;

  VehicleState next = state;
  next.position += state.speed * dt *
                   Vec2(std::cos(state.heading + slip), std::sin(state.heading + slip));
  next.heading = state.heading + (state.speed / cfg.wheelbase) * std::sin(slip) * dt;
  next.speed = std::clamp(state.speed + accel * dt, 0.0, cfg.v_max);
  next.last_throttle = throttle;
  next.last_steer = steer;
  return next;
}

double idm_acceleration(double speed, double gap, double lead_speed, const IdmParams& p) {
  if (!(gap > 0.0)) return -p.decel;
  const double free_term = std::pow(speed / p.desired_speed, p.exponent);
  double interaction = 0.0;
  if (std::isfinite(gap)) {
    const double dynamic = speed * p.time_headway +
                           speed * (speed - lead_speed) / (2.0 * std::sqrt(p.accel * p.decel));
    const double desired_gap = p.min_gap + std::max(0.0, dynamic);
    interaction = (desired_gap / gap) * (desired_gap / gap);
  }
  return std::clamp(p.accel * (1.0 - free_term - interaction), -p.decel, p.accel);
}

std::array<Vec2, 4> footprint(const VehicleState& v) {
  const Vec2 along = 0.5 * v.length * Vec2(std::cos(v.heading), std::sin(v.heading));
  const Vec2 across = 0.5 * v.width * Vec2(-std::sin(v.heading), std::cos(v.heading));
  return {v.position + along + across, v.position - along + across,
          v.position - along - across, v.position + along - across};
}

bool detect_collision(const VehicleState& a, const VehicleState& b) {
  const auto ca = footprint(a);
  const auto cb = footprint(b);
  const Vec2 axes[4] = {
      {std::cos(a.heading), std::sin(a.heading)}, {-std::sin(a.heading), std::cos(a.heading)},
      {std::cos(b.heading), std::sin(b.heading)}, {-std::sin(b.heading), std::cos(b.heading)}};
  for (const auto& axis : axes)
    if (separated_on(axis, ca, cb)) return false;
  return true;
}

std::vector<LaneId> lane_path(const road::RoadNetwork& network, LaneId lane,
                              std::span<const LaneId> route, double horizon) {
  std::vector<LaneId> path;
  if (!network.contains(lane)) return path;
  auto on_route = std::find(route.begin(), route.end(), lane);
  double covered = 0.0;
  LaneId cur = lane;
  while (path.size() < kMaxPathLanes) {
    path.push_back(cur);
    covered += network.lane(cur).length();
    if (covered - network.lane(lane).length() >= horizon) break;
    LaneId next = road::kNoLane;
    if (on_route != route.end() && std::next(on_route) != route.end()) {
      ++on_route;
      next = *on_route;
    } else {
      on_route = route.end();
      const auto& succ = network.lane(cur).successors();
      if (!succ.empty()) next = succ.front();
    }
    if (next == road::kNoLane) break;
    cur = next;
  }
  return path;
}

std::optional<PathPosition> locate_on_path(const road::RoadNetwork& network,
                                           std::span<const LaneId> path, const Vec2& point) {
  double offset = 0.0;
  for (LaneId id : path) {
    const auto& lane = network.lane(id);
    const auto pr = lane.project(point);
    if (pr.interior && std::abs(pr.lateral) <= lane.width() / 2.0)
      return PathPosition{offset + pr.longitudinal, pr.tangent_heading};
    offset += lane.length();
  }
  return std::nullopt;
}

Leader find_leader(const VehicleState& self, std::span<const LaneId> path,
                   const road::RoadNetwork& network, std::span<const VehicleState> others,
                   double horizon) {
  Leader leader;
  if (path.empty()) return leader;
  const double self_s = network.lane(path.front()).project(self.position).longitudinal;
  for (const auto& other : others) {
    if (!other.present) continue;
    const auto loc = locate_on_path(network, path, other.position);
    if (!loc) continue;
    const double ds = loc->s - self_s;
    if (ds <= 0.0 || ds > horizon) continue;
    const double gap = ds - 0.5 * (self.length + other.length);
    if (gap < leader.gap) {
      leader.gap = gap;
      leader.speed = other.speed * std::cos(other.heading - loc->tangent);
    }
  }
  return leader;
}

double time_to_collision(const VehicleState& ego, std::span<const VehicleState> others,
                         const road::RoadNetwork& network, std::span<const LaneId> route) {
  if (!network.contains(ego.lane)) return kInfinity;
  const auto path = lane_path(network, ego.lane, route, kTtcHorizon);
  const auto ego_pr = network.lane(ego.lane).project(ego.position);
  const double ego_along = ego.speed * std::cos(ego.heading - ego_pr.tangent_heading);

  double ttc = kInfinity;
  for (const auto& other : others) {
    if (!other.present) continue;
    const auto loc = locate_on_path(network, path, other.position);
    if (!loc) continue;
    const double ds = loc->s - ego_pr.longitudinal;
    const double gap = ds - 0.5 * (ego.length + other.length);
    if (ds <= 0.0 || gap > kTtcHorizon) continue;
    if (gap <= 0.0) {
      if (detect_collision(ego, other)) return 0.0;
      continue;
    }
    const double closing = ego_along - other.speed * std::cos(other.heading - loc->tangent);
    if (closing > 0.0) ttc = std::min(ttc, gap / closing);
  }
  return ttc;
}

void advance_route(AmbientVehicle& vehicle, const road::RoadNetwork& network) {
  while (vehicle.route_index < vehicle.route.size()) {
    const auto& lane = network.lane(vehicle.route[vehicle.route_index]);
    const auto pr = lane.project(vehicle.state.position);
    const bool past_end = !pr.interior && pr.longitudinal >= lane.length() - 1e-9;
    if (!past_end) break;
    if (vehicle.route_index + 1 == vehicle.route.size()) {
      vehicle.state.present = false;
      break;
    }
    ++vehicle.route_index;
  }
  if (vehicle.route_index < vehicle.route.size())
    vehicle.state.lane = vehicle.route[vehicle.route_index];
}

double lane_tracking_steer(const road::Lane& lane, const VehicleState& vehicle,
                           const DynamicsConfig& dyn, const LateralGains& gains) {
  const auto frame = lane.frame(vehicle.position, vehicle.heading);
  const double kappa = lane.curvature(frame.longitudinal);
  // Steady-state slip angle for the path curvature: sin(slip) = wheelbase * kappa.
  const double slip = std::asin(std::clamp(dyn.wheelbase * kappa, -1.0, 1.0));
  const double feedforward = std::atan(2.0 * std::tan(slip));
  // the centre of mass travels at heading + slip, so track the course angle
  const double course_error = frame.heading_error + slip;
  const double angle =
      feedforward - (gains.k_d * frame.lateral_offset + gains.k_h * course_error);
  return std::clamp(angle / dyn.max_steer, -1.0, 1.0);
}

Controls ambient_policy(const AmbientVehicle& vehicle, const road::RoadNetwork& network,
                        std::span<const VehicleState> neighbors, const DynamicsConfig& dyn,
                        const LateralGains& gains) {
  const auto& state = vehicle.state;
  if (vehicle.route_index >= vehicle.route.size()) return {};
  const LaneId lane_id = vehicle.route[vehicle.route_index];
  const auto& lane = network.lane(lane_id);
  const std::span<const LaneId> remaining(vehicle.route.data() + vehicle.route_index,
                                          vehicle.route.size() - vehicle.route_index);
  const auto path = lane_path(network, lane_id, remaining, kTtcHorizon);
  Leader leader = find_leader(state, path, network, neighbors, kTtcHorizon);

  if (network.must_yield(lane_id) && remaining.size() > 1) {
    const double to_end = lane.length() - lane.project(state.position).longitudinal;
    const double stop_gap = to_end - 0.5 * state.length - kStopStandoff;
    if (to_end < kYieldZone && stop_gap > kMinStoppingGap) {
      bool conflict = false;
      for (LaneId pred : network.predecessors(remaining[1])) {
        if (pred == lane_id) continue;
        const auto& feeder = network.lane(pred);
        for (const auto& other : neighbors) {
          if (!other.present) continue;
          const auto pr = feeder.project(other.position);
          if (!pr.interior || std::abs(pr.lateral) > feeder.width() / 2.0) continue;
          const double distance = feeder.length() - pr.longitudinal;
          if (distance / std::max(other.speed, 0.5) < kYieldTimeGap) conflict = true;
        }
      }
      if (conflict && stop_gap < leader.gap) leader = {stop_gap, 0.0};
    }
  }

  const double accel = idm_acceleration(state.speed, leader.gap, leader.speed, vehicle.idm);
  return {std::clamp(accel / dyn.a_max, -1.0, 1.0),
          lane_tracking_steer(lane, state, dyn, gains)};
}

}  // namespace rdrl::sim
