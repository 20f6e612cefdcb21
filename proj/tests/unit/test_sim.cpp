#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rdrl/road/geometry.hpp"
#include "rdrl/sim/traffic.hpp"
#include "oracles.hpp"

using namespace rdrl;
using namespace rdrl::sim;

namespace {

using oracles::clipping_overlap;
VehicleState at(double x, double y, double heading, double speed = 0.0) {
  return oracles::pose(x, y, heading, speed);
}

}  // namespace

TEST(Kinematics, FixedPointAtRest) {
  const DynamicsConfig cfg;
  const auto s = at(3.0, -2.0, 0.4);
  const auto n = step_kinematics(s, 0.0, 0.0, cfg);
  EXPECT_EQ(n.position, s.position);
  EXPECT_EQ(n.heading, s.heading);
  EXPECT_EQ(n.speed, 0.0);
}

TEST(Kinematics, StraightLineMotion) {
  const DynamicsConfig cfg;
  const double h = 0.3;
  const auto n = step_kinematics(at(0, 0, h, 10.0), 0.0, 0.0, cfg);
  EXPECT_NEAR((n.position - Vec2(std::cos(h), std::sin(h)) * (10.0 / 15.0)).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(n.heading, h);
  EXPECT_DOUBLE_EQ(n.speed, 10.0);
}

TEST(Kinematics, NonFiniteInputThrows) {
  const DynamicsConfig cfg;
  EXPECT_THROW(step_kinematics(at(0, 0, 0), std::nan(""), 0.0, cfg), std::invalid_argument);
  EXPECT_THROW(step_kinematics(at(0, 0, 0), 0.0, INFINITY, cfg), std::invalid_argument);
}

TEST(Kinematics, PositiveSteerTurnsLeft) {
  const DynamicsConfig cfg;
  auto s = at(0, 0, 0, 10.0);
  for (int i = 0; i < 10; ++i) s = step_kinematics(s, 0.0, 0.5, cfg);
  EXPECT_GT(s.heading, 0.0);
  EXPECT_GT(s.position.y(), 0.0);
}

TEST(Kinematics, SpeedClampedToRange) {
  const DynamicsConfig cfg;
  auto s = at(0, 0, 0, 0.1);
  s = step_kinematics(s, -1.0, 0.0, cfg);
  EXPECT_EQ(s.speed, 0.0);
  s.speed = cfg.v_max;
  s = step_kinematics(s, 1.0, 0.0, cfg);
  EXPECT_EQ(s.speed, cfg.v_max);
}

TEST(Kinematics, ConstantSteerCircleRadius) {
  for (double steer : {0.1, 0.2, 0.5, -0.8, 1.0})
    EXPECT_NEAR(oracles::circle_radius_ratio(steer), 1.0, 0.01) << "steer " << steer;
}

TEST(Idm, FreeFlowEquilibrium) {
  IdmParams p;
  EXPECT_NEAR(idm_acceleration(p.desired_speed, kInfinity, 0.0, p), 0.0, 1e-12);
  EXPECT_NEAR(idm_acceleration(0.0, kInfinity, 0.0, p), p.accel, 1e-12);
}

TEST(Idm, DesiredGapSubstitution) {
  IdmParams p;
  const double s_star = p.min_gap + 10.0 * p.time_headway;
  EXPECT_NEAR(idm_acceleration(10.0, s_star, 10.0, p), -p.accel, 1e-12);
  // a generic point evaluated by hand
  const double v = 7.0, gap = 12.0, lead = 4.0;
  const double ss = p.min_gap + v * p.time_headway + v * (v - lead) / (2 * std::sqrt(p.accel * p.decel));
  const double expected = p.accel * (1 - std::pow(v / p.desired_speed, 4) - (ss / gap) * (ss / gap));
  EXPECT_NEAR(idm_acceleration(v, gap, lead, p), std::max(expected, -p.decel), 1e-12);
}

TEST(Idm, NonPositiveGapIsEmergencyBraking) {
  IdmParams p;
  EXPECT_EQ(idm_acceleration(5.0, 0.0, 0.0, p), -p.decel);
  EXPECT_EQ(idm_acceleration(5.0, -1.0, 0.0, p), -p.decel);
}

TEST(Ambient, EquilibriumOnCenterline) {
  const auto net = road::build_highway();
  const DynamicsConfig dyn;
  AmbientVehicle v;
  v.state = at(100.0, 0.0, 0.0, v.idm.desired_speed);
  v.state.lane = 0;
  v.route = {0};
  const auto c = ambient_policy(v, net, {}, dyn);
  EXPECT_NEAR(c.throttle, 0.0, 1e-12);
  EXPECT_NEAR(c.steer, 0.0, 1e-12);
}

TEST(Ambient, OffsetLeftSteersRight) {
  const auto net = road::build_highway();
  const DynamicsConfig dyn;
  AmbientVehicle v;
  v.state = at(100.0, 1.0, 0.0, 5.0);
  v.state.lane = 0;
  v.route = {0};
  EXPECT_LT(ambient_policy(v, net, {}, dyn).steer, 0.0);
}

TEST(Ambient, StoppedLeaderMeansBraking) {
  const auto net = road::build_highway();
  const DynamicsConfig dyn;
  AmbientVehicle v;
  v.state = at(100.0, 0.0, 0.0, 5.0);
  v.state.lane = 0;
  v.route = {0};
  std::vector<VehicleState> others{at(100.0 + 7.0 + 5.0, 0.0, 0.0, 0.0)};
  others[0].lane = 0;
  EXPECT_LT(ambient_policy(v, net, others, dyn).throttle, 0.0);
}

TEST(Ambient, TracksRingCurvature) {
  const auto net = road::build_roundabout();
  const DynamicsConfig dyn;
  AmbientVehicle v;
  v.route = {0, 1, 2, 3, 4, 5, 6, 7};
  v.state.lane = 0;
  const auto& lane = net.lane(0);
  v.state.position = lane.position(1.0);
  v.state.heading = lane.heading(1.0);
  v.state.speed = 8.0;
  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    const auto c = ambient_policy(v, net, {}, dyn);
    v.state = step_kinematics(v.state, c.throttle, c.steer, dyn);
    advance_route(v, net);
    if (!v.state.present) break;
    const auto f = net.lane(v.state.lane).frame(v.state.position, v.state.heading);
    worst = std::max(worst, std::abs(f.lateral_offset));
  }
  EXPECT_LT(worst, 0.3);
}

TEST(Collision, IdenticalPosesOverlap) {
  EXPECT_TRUE(detect_collision(at(1, 2, 0.3), at(1, 2, 0.3)));
}

TEST(Collision, LateralSeparation) {
  EXPECT_FALSE(detect_collision(at(0, 0, 0), at(0, 2.5, 0)));
  EXPECT_TRUE(detect_collision(at(0, 0, 0), at(0, 1.5, 0)));
}

TEST(Collision, PerpendicularThreeMetres) {
  const auto a = at(0, 0, 0), b = at(3.0, 0, std::numbers::pi / 2);
  EXPECT_EQ(detect_collision(a, b), clipping_overlap(a, b));
  EXPECT_TRUE(detect_collision(a, b));
  const auto c = at(0, 0, 0), d = at(0, 3.0, std::numbers::pi / 2);
  EXPECT_EQ(detect_collision(c, d), clipping_overlap(c, d));
}

TEST(Collision, AgreesWithClippingOracle) {
  const auto r = oracles::collision_oracle(2000, 21);
  EXPECT_EQ(r.disagreements, 0);
  EXPECT_GT(r.overlaps, 100);
  EXPECT_LT(r.overlaps, 1900);
}

TEST(Ttc, Examples) {
  const auto net = road::build_highway();
  auto ego = at(100.0, 0.0, 0.0, 15.0);
  ego.lane = 0;
  EXPECT_EQ(time_to_collision(ego, {}, net), kInfinity);
  std::vector<VehicleState> lead{at(135.0, 0.0, 0.0, 5.0)};
  EXPECT_NEAR(time_to_collision(ego, lead, net), 3.0, 1e-12);
  lead[0].speed = 20.0;
  EXPECT_EQ(time_to_collision(ego, lead, net), kInfinity);
  // other lane and behind are ignored
  std::vector<VehicleState> side{at(135.0, -4.0, 0.0, 0.0), at(80.0, 0.0, 0.0, 0.0)};
  EXPECT_EQ(time_to_collision(ego, side, net), kInfinity);
  // overlap ahead
  std::vector<VehicleState> touching{at(103.0, 0.0, 0.0, 0.0)};
  EXPECT_EQ(time_to_collision(ego, touching, net), 0.0);
}

TEST(Ttc, FollowsRouteIntoNextLane) {
  const auto net = road::build_roundabout();
  const auto& l0 = net.lane(0);
  VehicleState ego;
  ego.lane = 0;
  ego.position = l0.position(l0.length() - 5.0);
  ego.heading = l0.heading(l0.length() - 5.0);
  ego.speed = 10.0;
  VehicleState other;
  other.position = net.lane(1).position(10.0);
  other.heading = net.lane(1).heading(10.0);
  const double ttc = time_to_collision(ego, std::span<const VehicleState>(&other, 1), net);
  EXPECT_TRUE(std::isfinite(ttc));
  EXPECT_NEAR(ttc, (15.0 - 5.0) / 10.0, 0.05);
}

TEST(Route, AdvanceMarksAbsentAfterLastLane) {
  const auto net = road::build_highway();
  AmbientVehicle v;
  v.route = {0};
  v.state = at(510.0, 0.0, 0.0, 10.0);
  advance_route(v, net);
  EXPECT_FALSE(v.state.present);
}

TEST(Platoon, NoCollisionsBehindBrakingLeader) {
  for (unsigned seed : {1u, 2u}) EXPECT_EQ(oracles::platoon_collision_steps(3000, seed), 0);
}
