#pragma once

#include <string>
#include <utility>
#include <vector>

namespace polarity {

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
};

// Least squares fit of log(value) against log(scale). Needs at least four
// points, positive scales and values, and two distinct scales.
TrendFit trend_fit(const std::vector<std::pair<double, double>>& points);

enum class VerdictKind { Bounded, Diverging, Inconclusive };
const char* verdict_name(VerdictKind v);

struct VerdictThresholds {
  double slope = 0.02;
  double r_squared = 0.9;
  std::size_t min_scales = 8;
  std::size_t tail_points = 6;  // points in each end fit
};

// Growth check at both ends of one trend. A trend diverges when an end fit
// grows outward (upper end slope > threshold, or lower end slope <
// -threshold) with a good fit; it is bounded when neither end grows.
struct TrendAssessment {
  TrendFit full;
  TrendFit lower;
  TrendFit upper;
  VerdictKind verdict = VerdictKind::Inconclusive;
  double growth_slope = 0.0;  // slope of the growing end, as a positive number
};

TrendAssessment assess_trend(const std::vector<std::pair<double, double>>& points,
                             const VerdictThresholds& t = {});

}  // namespace polarity
