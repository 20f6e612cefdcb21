#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace rdrl::road {

using Vec2 = Eigen::Vector2d;
using LaneId = int;

inline constexpr LaneId kNoLane = -1;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct LineSegment {
  Vec2 start;
  Vec2 end;
};

/// Circular arc. `sweep` is signed: positive runs counter-clockwise.
struct ArcSegment {
  Vec2 center;
  double radius;
  double start_angle;
  double sweep;
};

using Segment = std::variant<LineSegment, ArcSegment>;

/// Lane-frame coordinates of a point. Lateral offset is positive to the left
/// of the direction of travel.
struct LaneFrame {
  double lateral_offset = 0.0;
  double heading_error = 0.0;
  double longitudinal = 0.0;
};

/// Closest-point query result against a single lane.
struct LaneProjection {
  double longitudinal = 0.0;
  double lateral = 0.0;
  double distance = 0.0;
  double tangent_heading = 0.0;
  // false when the closest point is clamped to a lane end
  bool interior = true;
};

class Lane {
 public:
  Lane(LaneId id, std::vector<Segment> segments, double width, double speed_limit);

  LaneId id() const { return id_; }
  double width() const { return width_; }
  double speed_limit() const { return speed_limit_; }
  double length() const { return cumulative_.back(); }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<LaneId>& successors() const { return successors_; }
  void add_successor(LaneId next) { successors_.push_back(next); }

  Vec2 position(double s, double lateral = 0.0) const;
  double heading(double s) const;
  /// Signed curvature of the centerline, positive when turning left.
  double curvature(double s) const;

  LaneProjection project(const Vec2& point) const;
  LaneFrame frame(const Vec2& point, double heading) const;

 private:
  std::size_t segment_index(double s) const;

  LaneId id_;
  std::vector<Segment> segments_;
  std::vector<double> cumulative_;  // arc length at each segment start, plus total
  double width_;
  double speed_limit_;
  std::vector<LaneId> successors_;
};

struct EntryPoint {
  int leg;
  LaneId lane;
};

struct ExitPoint {
  int leg;
  LaneId lane;
  double terminal;  // arc position on `lane` that counts as arrival
};

enum class NetworkKind { kRoundabout, kHighway, kMerge };

class RoadNetwork {
 public:
  RoadNetwork(NetworkKind kind, std::vector<Lane> lanes, std::vector<EntryPoint> entries,
              std::vector<ExitPoint> exits, std::vector<LaneId> yield_lanes = {});

  NetworkKind kind() const { return kind_; }
  const std::vector<Lane>& lanes() const { return lanes_; }
  const Lane& lane(LaneId id) const;
  bool contains(LaneId id) const { return id >= 0 && id < static_cast<LaneId>(lanes_.size()); }
  const std::vector<EntryPoint>& entries() const { return entries_; }
  const std::vector<ExitPoint>& exits() const { return exits_; }
  std::vector<ExitPoint> exits_for_leg(int leg) const;
  int leg_count() const;
  std::vector<LaneId> predecessors(LaneId id) const;
  /// Lanes whose traffic gives way where they join another lane's successor.
  bool must_yield(LaneId id) const;

  /// Nearest lane to `position`. The hint lane wins while the point is inside
  /// it, then the hint's successors, then a global search (ties: smallest id).
  std::pair<LaneId, LaneFrame> project(const Vec2& position, double heading,
                                       LaneId hint = kNoLane) const;

  /// Shortest successor path (in lane count) from `from` to `to`, inclusive.
  /// Empty when unreachable.
  std::vector<LaneId> route(LaneId from, LaneId to) const;

 private:
  NetworkKind kind_;
  std::vector<Lane> lanes_;
  std::vector<EntryPoint> entries_;
  std::vector<ExitPoint> exits_;
  std::vector<LaneId> yield_lanes_;
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RoundaboutConfig {
  double ring_radius = 20.0;  // inner ring lane centerline
  double lane_width = 4.0;
  double leg_length = 80.0;
  double connector_radius = 15.0;
  double speed_limit = 10.0;
  double exit_terminal = 25.0;  // distance past the exit connector arc
};

struct HighwayConfig {
  int lanes = 3;
  double length = 500.0;
  double lane_width = 4.0;
  double speed_limit = 15.0;
  double terminal = 450.0;
};

struct MergeConfig {
  int main_lanes = 2;
  double length = 400.0;
  double lane_width = 4.0;
  double speed_limit = 15.0;
  double ramp_approach = 80.0;  // inclined ramp segment, along x
  double accel_lane = 100.0;    // parallel acceleration lane
  double taper = 30.0;          // forced-merge taper
  double terminal = 350.0;      // x coordinate that counts as arrival
};

RoadNetwork build_roundabout(const RoundaboutConfig& config = {});
RoadNetwork build_highway(const HighwayConfig& config = {});
RoadNetwork build_merge(const MergeConfig& config = {});

}  // namespace rdrl::road
