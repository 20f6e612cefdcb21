#include "rdrl/env/driving_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rdrl::env {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSpawnAttempts = 100;
constexpr double kSpeedGain = 1.0;  // 1/s, meta-action longitudinal P controller

double clip_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kRoundabout: return "roundabout";
    case Scenario::kHighway: return "highway";
    case Scenario::kMerge: return "merge";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "roundabout") return Scenario::kRoundabout;
  if (name == "highway") return Scenario::kHighway;
  if (name == "merge") return Scenario::kMerge;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::kNone: return "none";
    case TerminationCause::kCollision: return "collision";
    case TerminationCause::kArrived: return "arrived";
    case TerminationCause::kTimeout: return "timeout";
    case TerminationCause::kOffRoad: return "off_road";
  }
  return "unknown";
}

double EnvConfig::speed_limit() const {
  switch (scenario) {
    case Scenario::kRoundabout: return geometry.roundabout.speed_limit;
    case Scenario::kHighway: return geometry.highway.speed_limit;
    case Scenario::kMerge: return geometry.merge.speed_limit;
  }
  return geometry.roundabout.speed_limit;
}

void EnvConfig::validate() const {
  dynamics.validate();
  idm.validate();
  if (ambient_vehicles < 0) throw std::invalid_argument("ambient_vehicles must be >= 0");
  if (observed_vehicles < 0) throw std::invalid_argument("observed_vehicles must be >= 0");
  if (!(episode_seconds > 0.0)) throw std::invalid_argument("episode_seconds must be positive");
  if (!(off_road_factor > 0.0)) throw std::invalid_argument("off_road_factor must be positive");
  if (!(position_scale > 0.0)) throw std::invalid_argument("position_scale must be positive");
  if (!(ego_speed_ratio >= 0.0)) throw std::invalid_argument("ego_speed_ratio must be >= 0");
  if (!(spawn_clearance >= 0.0)) throw std::invalid_argument("spawn_clearance must be >= 0");
}

road::RoadNetwork build_network(const EnvConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::kRoundabout: return road::build_roundabout(cfg.geometry.roundabout);
    case Scenario::kHighway: return road::build_highway(cfg.geometry.highway);
    case Scenario::kMerge: return road::build_merge(cfg.geometry.merge);
  }
  throw std::invalid_argument("unknown scenario");
}

DrivingEnv::DrivingEnv(EnvConfig cfg) : cfg_(std::move(cfg)), network_(build_network(cfg_)) {
  cfg_.validate();
  cfg_.reward.v_limit = cfg_.speed_limit();
  cfg_.reward.v_max = cfg_.dynamics.v_max;
  cfg_.reward.a_max = cfg_.dynamics.a_max;
  cfg_.reward.validate();
}

Observation DrivingEnv::reset(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "env"));
  ambient_.clear();
  route_.clear();
  time_ = 0.0;
  steps_ = 0;
  terminated_ = false;
  first_decision_ = true;
  spawn_ego(rng);
  spawn_ambient(rng);
  meta_target_speed_ = ego_.speed;
  meta_target_lane_ = ego_.lane;
  reset_done_ = true;
  return observe();
}

void DrivingEnv::spawn_ego(Rng& rng) {
  road::LaneId entry_lane = road::kNoLane;
  const auto& entries = network_.entries();
  switch (cfg_.scenario) {
    case Scenario::kRoundabout: {
      std::uniform_int_distribution<int> leg_dist(0, 3);
      const int entry_leg = leg_dist(rng);
      std::uniform_int_distribution<int> other(1, 3);
      target_leg_ = (entry_leg + other(rng)) % 4;
      entry_lane = entries[static_cast<std::size_t>(entry_leg)].lane;
      route_ = network_.route(entry_lane, network_.exits_for_leg(target_leg_).front().lane);
      break;
    }
    case Scenario::kHighway: {
      std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
      entry_lane = entries[pick(rng)].lane;
      target_leg_ = 0;
      route_ = {entry_lane};
      break;
    }
    case Scenario::kMerge: {
      auto ramp = std::find_if(entries.begin(), entries.end(),
                               [](const road::EntryPoint& e) { return e.leg == 1; });
      entry_lane = ramp->lane;
      target_leg_ = 0;
      route_ = {entry_lane, network_.lane(entry_lane).successors().front()};
      break;
    }
  }
  const auto& lane = network_.lane(entry_lane);
  const double s = std::min(cfg_.ego_spawn_distance, lane.length());
  ego_ = sim::VehicleState{};
  ego_.position = lane.position(s);
  ego_.heading = lane.heading(s);
  ego_.speed = std::min(cfg_.ego_speed_ratio * cfg_.speed_limit(), cfg_.dynamics.v_max);
  ego_.lane = entry_lane;
}

bool DrivingEnv::clear_of_others(const road::Vec2& p) const {
  if ((ego_.position - p).norm() < cfg_.spawn_clearance) return false;
  for (const auto& v : ambient_)
    if ((v.state.position - p).norm() < cfg_.spawn_clearance) return false;
  return true;
}

void DrivingEnv::spawn_ambient(Rng& rng) {
  std::vector<road::LaneId> candidates;
  switch (cfg_.scenario) {
    case Scenario::kRoundabout:
      for (road::LaneId id = 8; id < 20; ++id) candidates.push_back(id);  // outer ring + entries
      break;
    case Scenario::kHighway:
      for (const auto& e : network_.entries()) candidates.push_back(e.lane);
      break;
    case Scenario::kMerge:
      for (const auto& e : network_.entries())
        if (e.leg == 0) candidates.push_back(e.lane);
      break;
  }
  const int legs = network_.leg_count();
  std::uniform_int_distribution<std::size_t> pick_lane(0, candidates.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int n = 0; n < cfg_.ambient_vehicles; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kSpawnAttempts && !placed; ++attempt) {
      const road::LaneId lane_id = candidates[pick_lane(rng)];
      const auto& lane = network_.lane(lane_id);
      double s_max = lane.length();
      if (cfg_.scenario == Scenario::kHighway) s_max = 0.6 * lane.length();
      const double s = unit(rng) * s_max;
      const road::Vec2 p = lane.position(s);

      std::vector<road::LaneId> route;
      if (cfg_.scenario == Scenario::kRoundabout) {
        std::uniform_int_distribution<int> leg_dist(0, legs - 1);
        route = network_.route(lane_id, network_.exits_for_leg(leg_dist(rng)).front().lane);
      } else {
        route = {lane_id};
        while (!network_.lane(route.back()).successors().empty() && route.size() < 8)
          route.push_back(network_.lane(route.back()).successors().front());
      }
      const double desired = cfg_.speed_limit() * (0.8 + 0.2 * unit(rng));
      const double initial = desired * (0.7 + 0.3 * unit(rng));
      if (route.empty() || !clear_of_others(p)) continue;

      sim::AmbientVehicle v;
      v.state.position = p;
      v.state.heading = lane.heading(s);
      v.state.speed = std::min(initial, cfg_.dynamics.v_max);
      v.state.lane = lane_id;
      v.route = std::move(route);
      v.idm = cfg_.idm;
      v.idm.desired_speed = desired;
      ambient_.push_back(std::move(v));
      placed = true;
    }
    if (!placed)
      throw EnvError("could not place ambient vehicle " + std::to_string(n) + " after " +
                     std::to_string(kSpawnAttempts) + " attempts");
  }
}

void DrivingEnv::place_ego(const sim::VehicleState& state) {
  ego_ = state;
  if (!network_.contains(ego_.lane)) ego_.lane = network_.project(ego_.position, ego_.heading).first;
  reset_done_ = true;
}

void DrivingEnv::add_ambient(sim::AmbientVehicle vehicle) { ambient_.push_back(std::move(vehicle)); }

void DrivingEnv::update_ego_lane() {
  auto it = std::find(route_.begin(), route_.end(), ego_.lane);
  if (network_.contains(ego_.lane) && it != route_.end() && std::next(it) != route_.end()) {
    const auto& cur = network_.lane(ego_.lane);
    const auto pr = cur.project(ego_.position);
    if (!pr.interior && pr.longitudinal >= cur.length() - 1e-9) {
      const auto& next = network_.lane(*std::next(it));
      const auto npr = next.project(ego_.position);
      if (npr.interior && std::abs(npr.lateral) <= next.width() / 2.0) {
        ego_.lane = next.id();
        return;
      }
    }
  }
  ego_.lane = network_.project(ego_.position, ego_.heading, ego_.lane).first;
}

road::LaneFrame DrivingEnv::ego_frame() const {
  return network_.lane(ego_.lane).frame(ego_.position, ego_.heading);
}

std::vector<sim::VehicleState> DrivingEnv::present_ambient() const {
  std::vector<sim::VehicleState> out;
  for (const auto& v : ambient_)
    if (v.state.present) out.push_back(v.state);
  return out;
}

std::vector<sim::VehicleState> DrivingEnv::others_of(std::size_t index) const {
  std::vector<sim::VehicleState> out{ego_};
  for (std::size_t j = 0; j < ambient_.size(); ++j)
    if (j != index && ambient_[j].state.present) out.push_back(ambient_[j].state);
  return out;
}

StepResult DrivingEnv::step(const ContinuousAction& action) {
  if (!reset_done_) throw std::logic_error("step() called before reset()");
  if (terminated_) throw std::logic_error("step() called after the episode terminated");
  if (!std::isfinite(action.throttle) || !std::isfinite(action.steer))
    throw std::invalid_argument("non-finite action");
  const double throttle = clip_unit(action.throttle);
  const double steer = clip_unit(action.steer);
  const double prev_throttle = first_decision_ ? throttle : ego_.last_throttle;
  const double prev_steer = first_decision_ ? steer : ego_.last_steer;
  first_decision_ = false;

  bool collided = false;
  const int substeps = cfg_.dynamics.substeps();
  std::vector<sim::Controls> controls(ambient_.size());
  for (int k = 0; k < substeps && !collided; ++k) {
    for (std::size_t i = 0; i < ambient_.size(); ++i) {
      if (!ambient_[i].state.present) continue;
      const auto others = others_of(i);
      controls[i] =
          sim::ambient_policy(ambient_[i], network_, others, cfg_.dynamics, cfg_.ambient_gains);
    }
    ego_ = sim::step_kinematics(ego_, throttle, steer, cfg_.dynamics);
    for (std::size_t i = 0; i < ambient_.size(); ++i) {
      auto& v = ambient_[i];
      if (!v.state.present) continue;
      v.state = sim::step_kinematics(v.state, controls[i].throttle, controls[i].steer,
                                     cfg_.dynamics);
      sim::advance_route(v, network_);
    }
    update_ego_lane();
    time_ += cfg_.dynamics.sim_dt;
    for (const auto& v : ambient_)
      if (v.state.present && sim::detect_collision(ego_, v.state)) collided = true;
  }
  ++steps_;

  const auto frame = ego_frame();
  const auto& lane = network_.lane(ego_.lane);
  const auto others = present_ambient();
  const double ttc = sim::time_to_collision(ego_, others, network_, route_);

  bool arrived = false;
  for (const auto& exit : network_.exits_for_leg(target_leg_))
    if (exit.lane == ego_.lane && frame.longitudinal >= exit.terminal) arrived = true;
  const bool off_road = std::abs(frame.lateral_offset) > cfg_.off_road_factor * lane.width();
  const bool timeout = time_ >= cfg_.episode_seconds - 1e-9;

  StepResult out;
  if (collided) out.cause = TerminationCause::kCollision;
  else if (off_road) out.cause = TerminationCause::kOffRoad;
  else if (arrived) out.cause = TerminationCause::kArrived;
  else if (timeout) out.cause = TerminationCause::kTimeout;
  out.terminated = out.cause != TerminationCause::kNone;
  terminated_ = out.terminated;

  reward::RewardInputs in;
  in.lateral_offset = frame.lateral_offset;
  in.lane_width = lane.width();
  in.ttc = ttc;
  in.speed = ego_.speed;
  in.throttle = throttle;
  in.prev_throttle = prev_throttle;
  in.steer = steer;
  in.prev_steer = prev_steer;
  in.arrived = out.cause == TerminationCause::kArrived;
  out.reward = reward::compute_reward(in, cfg_.reward);

  out.info.time = time_;
  out.info.ttc = ttc;
  out.info.lateral_offset = frame.lateral_offset;
  out.info.speed = ego_.speed;
  out.info.vsp = out.reward.vsp;
  out.info.throttle = throttle;
  out.info.steer = steer;
  out.info.position = ego_.position;
  out.info.lane = ego_.lane;
  out.observation = observe();
  return out;
}

StepResult DrivingEnv::step(MetaAction action) {
  if (!reset_done_) throw std::logic_error("step() called before reset()");
  return step(meta_to_continuous(action));
}

ContinuousAction DrivingEnv::meta_to_continuous(MetaAction action) {
  const auto& cur = network_.lane(ego_.lane);
  const auto frame = ego_frame();
  switch (action) {
    case MetaAction::kFaster:
      meta_target_speed_ = std::min(meta_target_speed_ + cfg_.meta_speed_step, cfg_.dynamics.v_max);
      break;
    case MetaAction::kSlower:
      meta_target_speed_ = std::max(meta_target_speed_ - cfg_.meta_speed_step, 0.0);
      break;
    case MetaAction::kLaneLeft:
    case MetaAction::kLaneRight: {
      const double side = action == MetaAction::kLaneLeft ? 1.0 : -1.0;
      const road::Vec2 probe = cur.position(frame.longitudinal, side * cur.width());
      const auto [lane_id, probe_frame] = network_.project(probe, ego_.heading);
      if (lane_id != ego_.lane &&
          std::abs(probe_frame.lateral_offset) <= network_.lane(lane_id).width() / 2.0)
        meta_target_lane_ = lane_id;
      break;
    }
    case MetaAction::kIdle:
      break;
  }
  if (!network_.contains(meta_target_lane_) ||
      !network_.lane(meta_target_lane_).project(ego_.position).interior)
    meta_target_lane_ = ego_.lane;

  ContinuousAction out;
  out.throttle =
      clip_unit(kSpeedGain * (meta_target_speed_ - ego_.speed) / cfg_.dynamics.a_max);
  out.steer = sim::lane_tracking_steer(network_.lane(meta_target_lane_), ego_, cfg_.dynamics,
                                       cfg_.ambient_gains);
  return out;
}

ContinuousAction DrivingEnv::route_following_action(double target_speed) const {
  ContinuousAction out;
  out.throttle = clip_unit((target_speed - ego_.speed) / cfg_.dynamics.a_max);
  out.steer =
      sim::lane_tracking_steer(network_.lane(ego_.lane), ego_, cfg_.dynamics, cfg_.ambient_gains);
  return out;
}

Observation DrivingEnv::observe() const {
  Observation obs = Observation::Zero(observation_rows(), kFeatureCount);
  if (!reset_done_) return obs;
  const double pos_scale = cfg_.position_scale;
  const double v_scale = cfg_.dynamics.v_max;

  const auto frame = ego_frame();
  const road::Vec2 ego_v = ego_.velocity();
  obs.row(0) << 1.0, clip_unit(ego_.position.x() / pos_scale),
      clip_unit(ego_.position.y() / pos_scale), clip_unit(ego_v.x() / v_scale),
      clip_unit(ego_v.y() / v_scale), clip_unit(frame.heading_error / kPi),
      clip_unit(frame.lateral_offset / network_.lane(ego_.lane).width());

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < ambient_.size(); ++i)
    if (ambient_[i].state.present) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (ambient_[a].state.position - ego_.position).squaredNorm() <
           (ambient_[b].state.position - ego_.position).squaredNorm();
  });

  const std::size_t rows = std::min<std::size_t>(order.size(), cfg_.observed_vehicles);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& v = ambient_[order[r]].state;
    const auto& lane = network_.lane(v.lane);
    const auto vf = lane.frame(v.position, v.heading);
    const road::Vec2 dp = v.position - ego_.position;
    const road::Vec2 dv = v.velocity() - ego_v;
    obs.row(static_cast<Eigen::Index>(r + 1)) << 1.0, clip_unit(dp.x() / pos_scale),
        clip_unit(dp.y() / pos_scale), clip_unit(dv.x() / v_scale), clip_unit(dv.y() / v_scale),
        clip_unit(vf.heading_error / kPi), clip_unit(vf.lateral_offset / lane.width());
  }
  return obs;
}

}  // namespace rdrl::env
