#include "rdrl/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace rdrl::eval {

void WeightVector::validate() const {
  double sum = 0.0;
  for (double w : values) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-4) throw std::invalid_argument("weights must sum to 1 (within 1e-4)");
}

double collision_rate_score(long num_collisions, long total_steps) {
  if (total_steps <= 0) throw std::invalid_argument("collision score needs T > 0");
  const double raw = 1.0 - (static_cast<double>(num_collisions) / static_cast<double>(total_steps)) * 1e3;
  return std::max(raw, 0.0);
}

double score(const Indicators& indicators, const WeightVector& weights) {
  double total = 0.0;
  for (int i = 0; i < kIndicatorCount; ++i) total += weights.values[i] * indicators[i];
  return total;
}

void MetricReport::finalize() {
  if (total_steps > 0) collision_rate_score = eval::collision_rate_score(collisions, total_steps);
  total_score = score(indicators(), weights);
}

MetricReport merge(const MetricReport& a, const MetricReport& b) {
  MetricReport out;
  out.weights = a.weights;
  out.rounds = a.rounds + b.rounds;
  out.total_steps = a.total_steps + b.total_steps;
  out.collisions = a.collisions + b.collisions;
  out.arrivals = a.arrivals + b.arrivals;
  out.off_road = a.off_road + b.off_road;
  out.timeouts = a.timeouts + b.timeouts;
  if (out.total_steps > 0) {
    const double ta = static_cast<double>(a.total_steps), tb = static_cast<double>(b.total_steps);
    const double t = ta + tb;
    out.lane_centering = (a.lane_centering * ta + b.lane_centering * tb) / t;
    out.efficiency = (a.efficiency * ta + b.efficiency * tb) / t;
    out.comfort = (a.comfort * ta + b.comfort * tb) / t;
    out.energy = (a.energy * ta + b.energy * tb) / t;
  }
  out.finalize();
  return out;
}

nlohmann::json to_json(const MetricReport& r) {
  return {{"collision_rate_score", r.collision_rate_score},
          {"lane_centering", r.lane_centering},
          {"efficiency", r.efficiency},
          {"comfort", r.comfort},
          {"energy", r.energy},
          {"total_score", r.total_score},
          {"rounds", r.rounds},
          {"total_steps", r.total_steps},
          {"collisions", r.collisions},
          {"arrivals", r.arrivals},
          {"off_road", r.off_road},
          {"timeouts", r.timeouts},
          {"weights", r.weights.values}};
}

MetricReport report_from_json(const nlohmann::json& j) {
  MetricReport r;
  r.collision_rate_score = j.at("collision_rate_score").get<double>();
  r.lane_centering = j.at("lane_centering").get<double>();
  r.efficiency = j.at("efficiency").get<double>();
  r.comfort = j.at("comfort").get<double>();
  r.energy = j.at("energy").get<double>();
  r.total_score = j.at("total_score").get<double>();
  r.rounds = j.at("rounds").get<int>();
  r.total_steps = j.at("total_steps").get<long>();
  r.collisions = j.value("collisions", 0L);
  r.arrivals = j.value("arrivals", 0);
  r.off_road = j.value("off_road", 0);
  r.timeouts = j.value("timeouts", 0);
  if (j.contains("weights")) r.weights.values = j.at("weights").get<Indicators>();
  return r;
}

void write_indicator_csv(std::ostream& out, const MetricReport& r) {
  for (int i = 0; i < kIndicatorCount; ++i) out << (i ? "," : "") << kIndicatorNames[i];
  out << '\n' << std::setprecision(10);
  const auto ind = r.indicators();
  for (int i = 0; i < kIndicatorCount; ++i) out << (i ? "," : "") << ind[i];
  out << '\n';
}

}  // namespace rdrl::eval
