#include "rdrl/road/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace rdrl::road {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContinuityTol = 1e-6;

Vec2 left_normal(double heading) { return {-std::sin(heading), std::cos(heading)}; }

double segment_length(const Segment& seg) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LineSegment>) {
          return (s.end - s.start).norm();
        } else {
          return s.radius * std::abs(s.sweep);
        }
      },
      seg);
}

double arc_direction(const ArcSegment& arc) { return arc.sweep >= 0.0 ? 1.0 : -1.0; }

Vec2 segment_point(const Segment& seg, double s) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    const double len = (line->end - line->start).norm();
    if (len == 0.0) return line->start;
    return line->start + (line->end - line->start) * (s / len);
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double angle = arc.start_angle + arc_direction(arc) * s / arc.radius;
  return arc.center + arc.radius * Vec2(std::cos(angle), std::sin(angle));
}

double segment_heading(const Segment& seg, double s) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    const Vec2 d = line->end - line->start;
    return std::atan2(d.y(), d.x());
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double dir = arc_direction(arc);
  const double angle = arc.start_angle + dir * s / arc.radius;
  return wrap_angle(angle + dir * kPi / 2.0);
}

struct SegmentProjection {
  double s = 0.0;
  double lateral = 0.0;
  double distance = 0.0;
  double tangent = 0.0;
  int clamp = 0;  // -1 clamped at start, +1 clamped at end
};

SegmentProjection clamped_to(const Segment& seg, const Vec2& p, double s, int side) {
  SegmentProjection out;
  const Vec2 foot = segment_point(seg, s);
  out.s = s;
  out.tangent = segment_heading(seg, s);
  out.distance = (p - foot).norm();
  out.lateral = std::copysign(out.distance, (p - foot).dot(left_normal(out.tangent)));
  out.clamp = side;
  return out;
}

SegmentProjection project_segment(const Segment& seg, const Vec2& p) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    const Vec2 d = line->end - line->start;
    const double len = d.norm();
    if (len == 0.0) return clamped_to(seg, p, 0.0, -1);
    const Vec2 u = d / len;
    const double t = (p - line->start).dot(u);
    if (t < 0.0) return clamped_to(seg, p, 0.0, -1);
    if (t > len) return clamped_to(seg, p, len, +1);
    SegmentProjection out;
    out.s = t;
    out.tangent = std::atan2(u.y(), u.x());
    out.lateral = (p - line->start).dot(Vec2(-u.y(), u.x()));
    out.distance = std::abs(out.lateral);
    return out;
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double dir = arc_direction(arc);
  const Vec2 rel = p - arc.center;
  const double rho = rel.norm();
  const double phi = std::atan2(rel.y(), rel.x());
  double delta = std::fmod(dir * (phi - arc.start_angle), 2.0 * kPi);
  if (delta < 0.0) delta += 2.0 * kPi;
  const double span = std::abs(arc.sweep);
  if (rho > 0.0 && delta <= span) {
    SegmentProjection out;
    out.s = arc.radius * delta;
    out.tangent = wrap_angle(phi + dir * kPi / 2.0);
    out.lateral = dir * (arc.radius - rho);
    out.distance = std::abs(arc.radius - rho);
    return out;
  }
  const double len = arc.radius * span;
  auto at_start = clamped_to(seg, p, 0.0, -1);
  auto at_end = clamped_to(seg, p, len, +1);
  return at_end.distance < at_start.distance ? at_end : at_start;
}

}  // namespace

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Lane::Lane(LaneId id, std::vector<Segment> segments, double width, double speed_limit)
    : id_(id), segments_(std::move(segments)), width_(width), speed_limit_(speed_limit) {
  if (!(width_ > 0.0)) throw GeometryError("lane width must be positive");
  if (!(speed_limit_ > 0.0)) throw GeometryError("lane speed limit must be positive");
  if (segments_.empty()) throw GeometryError("lane needs at least one segment");
  cumulative_.reserve(segments_.size() + 1);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double len = segment_length(segments_[i]);
    if (!(len > 0.0)) throw GeometryError("lane segment has zero length");
    if (i > 0) {
      const Vec2 prev_end = segment_point(segments_[i - 1], segment_length(segments_[i - 1]));
      if ((prev_end - segment_point(segments_[i], 0.0)).norm() > kContinuityTol)
        throw GeometryError("lane centerline is not continuous");
    }
    cumulative_.push_back(cumulative_.back() + len);
  }
}

std::size_t Lane::segment_index(double s) const {
  auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end() - 1, s);
  return static_cast<std::size_t>(std::distance(cumulative_.begin() + 1, it));
}

Vec2 Lane::position(double s, double lateral) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  const double local = s - cumulative_[i];
  return segment_point(segments_[i], local) +
         lateral * left_normal(segment_heading(segments_[i], local));
}

double Lane::heading(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  return segment_heading(segments_[i], s - cumulative_[i]);
}

double Lane::curvature(double s) const {
  s = std::clamp(s, 0.0, length());
  const auto& seg = segments_[segment_index(s)];
  if (const auto* arc = std::get_if<ArcSegment>(&seg)) return arc_direction(*arc) / arc->radius;
  return 0.0;
}

LaneProjection Lane::project(const Vec2& point) const {
  LaneProjection best;
  bool have = false;
  const std::size_t last = segments_.size() - 1;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const SegmentProjection sp = project_segment(segments_[i], point);
    const bool interior = !((i == 0 && sp.clamp < 0) || (i == last && sp.clamp > 0));
    const bool better =
        !have || sp.distance < best.distance - 1e-12 ||
        (std::abs(sp.distance - best.distance) <= 1e-12 && interior && !best.interior);
    if (better) {
      best.longitudinal = cumulative_[i] + sp.s;
      best.lateral = sp.lateral;
      best.distance = sp.distance;
      best.tangent_heading = sp.tangent;
      best.interior = interior;
      have = true;
    }
  }
  return best;
}

LaneFrame Lane::frame(const Vec2& point, double heading) const {
  const LaneProjection pr = project(point);
  return {pr.lateral, wrap_angle(heading - pr.tangent_heading), pr.longitudinal};
}

RoadNetwork::RoadNetwork(NetworkKind kind, std::vector<Lane> lanes,
                         std::vector<EntryPoint> entries, std::vector<ExitPoint> exits,
                         std::vector<LaneId> yield_lanes)
    : kind_(kind), lanes_(std::move(lanes)), entries_(std::move(entries)),
      exits_(std::move(exits)), yield_lanes_(std::move(yield_lanes)) {
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    if (lanes_[i].id() != static_cast<LaneId>(i))
      throw GeometryError("lane ids must equal their index");
  }
  for (const auto& lane : lanes_) {
    const Vec2 end = lane.position(lane.length());
    for (LaneId next : lane.successors()) {
      if (!contains(next))
        throw GeometryError("lane " + std::to_string(lane.id()) + " has unknown successor");
      if ((lanes_[next].position(0.0) - end).norm() > kContinuityTol)
        throw GeometryError("successor of lane " + std::to_string(lane.id()) +
                            " does not start where it ends");
    }
  }
  for (const auto& e : entries_)
    if (!contains(e.lane)) throw GeometryError("entry references unknown lane");
  for (const auto& e : exits_) {
    if (!contains(e.lane)) throw GeometryError("exit references unknown lane");
    if (e.terminal < 0.0 || e.terminal > lanes_[e.lane].length())
      throw GeometryError("exit terminal position outside its lane");
  }
}

const Lane& RoadNetwork::lane(LaneId id) const {
  if (!contains(id)) throw GeometryError("unknown lane id " + std::to_string(id));
  return lanes_[static_cast<std::size_t>(id)];
}

std::vector<ExitPoint> RoadNetwork::exits_for_leg(int leg) const {
  std::vector<ExitPoint> out;
  for (const auto& e : exits_)
    if (e.leg == leg) out.push_back(e);
  return out;
}

int RoadNetwork::leg_count() const {
  int legs = 0;
  for (const auto& e : entries_) legs = std::max(legs, e.leg + 1);
  for (const auto& e : exits_) legs = std::max(legs, e.leg + 1);
  return legs;
}

std::vector<LaneId> RoadNetwork::predecessors(LaneId id) const {
  std::vector<LaneId> out;
  for (const auto& lane : lanes_) {
    const auto& succ = lane.successors();
    if (std::find(succ.begin(), succ.end(), id) != succ.end()) out.push_back(lane.id());
  }
  return out;
}

bool RoadNetwork::must_yield(LaneId id) const {
  return std::find(yield_lanes_.begin(), yield_lanes_.end(), id) != yield_lanes_.end();
}

std::pair<LaneId, LaneFrame> RoadNetwork::project(const Vec2& position, double heading,
                                                  LaneId hint) const {
  auto to_frame = [&](const LaneProjection& pr) {
    return LaneFrame{pr.lateral, wrap_angle(heading - pr.tangent_heading), pr.longitudinal};
  };
  auto inside = [](const Lane& lane, const LaneProjection& pr) {
    return pr.interior && std::abs(pr.lateral) <= lane.width() / 2.0;
  };

  if (contains(hint)) {
    const Lane& h = lanes_[hint];
    const LaneProjection pr = h.project(position);
    if (inside(h, pr)) return {hint, to_frame(pr)};

    std::vector<LaneId> succ = h.successors();
    std::sort(succ.begin(), succ.end());
    LaneId best = kNoLane;
    LaneProjection best_pr;
    for (LaneId id : succ) {
      const LaneProjection spr = lanes_[id].project(position);
      if (!inside(lanes_[id], spr)) continue;
      if (best == kNoLane || spr.distance < best_pr.distance) {
        best = id;
        best_pr = spr;
      }
    }
    if (best != kNoLane) return {best, to_frame(best_pr)};
  }

  LaneId best = kNoLane;
  LaneProjection best_pr;
  for (const auto& lane : lanes_) {
    const LaneProjection pr = lane.project(position);
    if (best == kNoLane || pr.distance < best_pr.distance) {
      best = lane.id();
      best_pr = pr;
    }
  }
  return {best, to_frame(best_pr)};
}

std::vector<LaneId> RoadNetwork::route(LaneId from, LaneId to) const {
  if (!contains(from) || !contains(to)) return {};
  std::vector<LaneId> parent(lanes_.size(), kNoLane);
  std::vector<bool> seen(lanes_.size(), false);
  std::deque<LaneId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const LaneId cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (LaneId next : lanes_[cur].successors()) {
      if (seen[next]) continue;
      seen[next] = true;
      parent[next] = cur;
      queue.push_back(next);
    }
  }
  if (!seen[to]) return {};
  std::vector<LaneId> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace rdrl::road
