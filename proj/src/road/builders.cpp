#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

#include "rdrl/road/geometry.hpp"

namespace rdrl::road {
namespace {

constexpr double kPi = std::numbers::pi;

Vec2 rotate(const Vec2& v, double angle) { return Eigen::Rotation2Dd(angle) * v; }

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw GeometryError(std::string(name) + " must be positive");
}

}  // namespace

// Two-lane ring, counter-clockwise circulation, four legs at 90 degree spacing.
// Each leg has an entry connector (straight + right-turning fillet) joining the
// outer ring lane tangentially, and the mirrored exit connector.
//
// Lane ids: inner ring 0..7, outer ring 8..15, entries 16..19, exits 20..23.
// Ring lanes are split at the eight connector junctions; ring segment 2k runs
// past leg k, segment 2k+1 runs from leg k's entry to leg k+1's exit.
RoadNetwork build_roundabout(const RoundaboutConfig& c) {
  require_positive(c.ring_radius, "ring radius");
  require_positive(c.lane_width, "lane width");
  require_positive(c.leg_length, "leg length");
  require_positive(c.connector_radius, "connector radius");
  require_positive(c.speed_limit, "speed limit");

  const double inner = c.ring_radius;
  const double outer = c.ring_radius + c.lane_width;
  const double half = c.lane_width / 2.0;
  const double rf = c.connector_radius;
  const double cx2 = (outer + rf) * (outer + rf) - (half + rf) * (half + rf);
  if (!(cx2 > 0.0)) throw GeometryError("connector geometry does not fit the ring");
  const double cx = std::sqrt(cx2);
  const double junction = std::atan2(half + rf, cx);
  if (!(junction < kPi / 4.0)) throw GeometryError("connector radius too large for ring");

  std::vector<double> breaks;
  for (int k = 0; k < 4; ++k) {
    breaks.push_back(k * kPi / 2.0 - junction);
    breaks.push_back(k * kPi / 2.0 + junction);
  }

  std::vector<Lane> lanes;
  for (double radius : {inner, outer}) {
    for (int j = 0; j < 8; ++j) {
      const double a0 = breaks[j];
      const double a1 = j + 1 < 8 ? breaks[j + 1] : breaks[0] + 2.0 * kPi;
      lanes.emplace_back(static_cast<LaneId>(lanes.size()),
                         std::vector<Segment>{ArcSegment{Vec2::Zero(), radius, a0, a1 - a0}},
                         c.lane_width, c.speed_limit);
    }
  }

  const Vec2 entry_center(cx, half + rf);
  const double entry_contact = std::atan2(-entry_center.y(), -entry_center.x());
  const double entry_sweep = entry_contact + kPi / 2.0;
  const Vec2 exit_center(cx, -(half + rf));
  const double exit_start = std::atan2(half + rf, -cx);
  const double exit_sweep = kPi / 2.0 - exit_start;
  const double connector_arc = rf * std::abs(entry_sweep);

  for (int k = 0; k < 4; ++k) {
    const double phi = k * kPi / 2.0;
    std::vector<Segment> segs{
        LineSegment{rotate({cx + c.leg_length, half}, phi), rotate({cx, half}, phi)},
        ArcSegment{rotate(entry_center, phi), rf, -kPi / 2.0 + phi, entry_sweep}};
    lanes.emplace_back(16 + k, std::move(segs), c.lane_width, c.speed_limit);
  }
  for (int k = 0; k < 4; ++k) {
    const double phi = k * kPi / 2.0;
    std::vector<Segment> segs{
        ArcSegment{rotate(exit_center, phi), rf, exit_start + phi, exit_sweep},
        LineSegment{rotate({cx, -half}, phi), rotate({cx + c.leg_length, -half}, phi)}};
    lanes.emplace_back(20 + k, std::move(segs), c.lane_width, c.speed_limit);
  }

  for (int j = 0; j < 8; ++j) {
    lanes[j].add_successor((j + 1) % 8);
    lanes[8 + j].add_successor(8 + (j + 1) % 8);
  }
  for (int k = 0; k < 4; ++k) {
    lanes[8 + 2 * k + 1].add_successor(20 + (k + 1) % 4);
    lanes[16 + k].add_successor(8 + 2 * k + 1);
  }

  const double terminal = connector_arc + c.exit_terminal;
  if (!(terminal < connector_arc + c.leg_length))
    throw GeometryError("exit terminal beyond the end of the exit leg");

  std::vector<EntryPoint> entries;
  std::vector<ExitPoint> exits;
  for (int k = 0; k < 4; ++k) {
    entries.push_back({k, 16 + k});
    exits.push_back({k, 20 + k, terminal});
  }
  return RoadNetwork(NetworkKind::kRoundabout, std::move(lanes), std::move(entries),
                     std::move(exits), {16, 17, 18, 19});
}

// Straight road along +x; lane 0 is leftmost, lane i centered at y = -i * width.
RoadNetwork build_highway(const HighwayConfig& c) {
  if (c.lanes < 1) throw GeometryError("highway needs at least one lane");
  require_positive(c.length, "highway length");
  require_positive(c.lane_width, "lane width");
  require_positive(c.speed_limit, "speed limit");
  if (c.terminal <= 0.0 || c.terminal > c.length)
    throw GeometryError("highway terminal must lie on the road");

  std::vector<Lane> lanes;
  std::vector<EntryPoint> entries;
  std::vector<ExitPoint> exits;
  for (int i = 0; i < c.lanes; ++i) {
    const double y = -i * c.lane_width;
    lanes.emplace_back(i, std::vector<Segment>{LineSegment{{0.0, y}, {c.length, y}}},
                       c.lane_width, c.speed_limit);
    entries.push_back({0, i});
    exits.push_back({0, i, c.terminal});
  }
  return RoadNetwork(NetworkKind::kHighway, std::move(lanes), std::move(entries),
                     std::move(exits));
}

// Main carriageway along +x plus an on-ramp from the right. The rightmost main
// lane is split at the gore point so the ramp's taper can end where the
// downstream piece starts. Lane ids: main lanes 0..n-2 (full length), n-1
// (rightmost, upstream of the gore), n (rightmost, downstream), n+1 (ramp).
RoadNetwork build_merge(const MergeConfig& c) {
  if (c.main_lanes < 1) throw GeometryError("merge needs at least one main lane");
  require_positive(c.length, "road length");
  require_positive(c.lane_width, "lane width");
  require_positive(c.speed_limit, "speed limit");
  require_positive(c.ramp_approach, "ramp approach");
  require_positive(c.accel_lane, "acceleration lane");
  require_positive(c.taper, "taper");

  const int n = c.main_lanes;
  const double gore = c.ramp_approach + c.accel_lane + c.taper;
  if (!(gore < c.length)) throw GeometryError("ramp longer than the main road");
  if (!(c.terminal > gore && c.terminal < c.length))
    throw GeometryError("merge terminal must lie downstream of the gore point");

  std::vector<Lane> lanes;
  for (int i = 0; i < n - 1; ++i) {
    const double y = -i * c.lane_width;
    lanes.emplace_back(i, std::vector<Segment>{LineSegment{{0.0, y}, {c.length, y}}},
                       c.lane_width, c.speed_limit);
  }
  const double yr = -(n - 1) * c.lane_width;
  lanes.emplace_back(n - 1, std::vector<Segment>{LineSegment{{0.0, yr}, {gore, yr}}},
                     c.lane_width, c.speed_limit);
  lanes.emplace_back(n, std::vector<Segment>{LineSegment{{gore, yr}, {c.length, yr}}},
                     c.lane_width, c.speed_limit);
  const double ramp_y = yr - c.lane_width;
  const double ramp_drop = 3.0 * c.lane_width;
  const double accel_end = c.ramp_approach + c.accel_lane;
  lanes.emplace_back(
      n + 1,
      std::vector<Segment>{LineSegment{{0.0, ramp_y - ramp_drop}, {c.ramp_approach, ramp_y}},
                           LineSegment{{c.ramp_approach, ramp_y}, {accel_end, ramp_y}},
                           LineSegment{{accel_end, ramp_y}, {gore, yr}}},
      c.lane_width, c.speed_limit);
  lanes[n - 1].add_successor(n);
  lanes[n + 1].add_successor(n);

  std::vector<EntryPoint> entries;
  std::vector<ExitPoint> exits;
  for (int i = 0; i < n - 1; ++i) {
    entries.push_back({0, i});
    exits.push_back({0, i, c.terminal});
  }
  entries.push_back({0, n - 1});
  entries.push_back({1, n + 1});
  exits.push_back({0, n, c.terminal - gore});
  return RoadNetwork(NetworkKind::kMerge, std::move(lanes), std::move(entries),
                     std::move(exits), {n + 1});
}

}  // namespace rdrl::road
