#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace rdrl::eval {

inline constexpr int kIndicatorCount = 5;
using Indicators = std::array<double, kIndicatorCount>;

/// Indicator order used everywhere: collision, lane centering, efficiency,
/// comfort, energy.
inline const std::array<std::string, kIndicatorCount> kIndicatorNames{
    "collision_rate_score", "lane_centering", "efficiency", "comfort", "energy"};

struct WeightVector {
  Indicators values{0.4764, 0.2853, 0.1428, 0.0634, 0.0320};
  /// Non-negative entries summing to 1 within 1e-4.
  void validate() const;
};

/// 1 - (collisions / steps) * 1000, clamped below at 0.
double collision_rate_score(long num_collisions, long total_steps);

/// Weighted sum of the indicators.
double score(const Indicators& indicators, const WeightVector& weights = {});

struct MetricReport {
  double collision_rate_score = 1.0;
  double lane_centering = 0.0;
  double efficiency = 0.0;
  double comfort = 0.0;
  double energy = 0.0;
  double total_score = 0.0;
  int rounds = 0;
  long total_steps = 0;
  long collisions = 0;
  int arrivals = 0;
  int off_road = 0;
  int timeouts = 0;
  WeightVector weights;

  Indicators indicators() const {
    return {collision_rate_score, lane_centering, efficiency, comfort, energy};
  }
  /// Recomputes the collision score and total from the stored fields.
  void finalize();
};

/// Step-weighted merge of two reports over disjoint rounds (same weights).
MetricReport merge(const MetricReport& a, const MetricReport& b);

nlohmann::json to_json(const MetricReport& r);
MetricReport report_from_json(const nlohmann::json& j);

/// One header line plus one row of the five indicators.
void write_indicator_csv(std::ostream& out, const MetricReport& r);

}  // namespace rdrl::eval
