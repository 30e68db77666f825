#include "polarity/trend.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/errors.hpp"

namespace polarity {

const char* verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Bounded: return "bounded";
    case VerdictKind::Diverging: return "diverging";
    default: return "inconclusive";
  }
}

TrendFit trend_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) fail(ErrorCode::DegenerateInput, "trend fit needs at least 4 points");
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& [s, v] : points) {
    if (!(s > 0.0) || !(v > 0.0) || !std::isfinite(s) || !std::isfinite(v))
      fail(ErrorCode::DegenerateInput, "trend fit needs positive finite scales and values");
    mx += std::log(s);
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [s, v] : points) {
    const double dx = std::log(s) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 1e-300) fail(ErrorCode::DegenerateInput, "all scales are equal");
  TrendFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = points.size();
  // A perfectly flat series is fitted exactly.
  f.r_squared = syy <= 1e-28 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

TrendAssessment assess_trend(const std::vector<std::pair<double, double>>& points, const VerdictThresholds& t) {
  auto sorted = points;
  std::sort(sorted.begin(), sorted.end());
  TrendAssessment a;
  a.full = trend_fit(sorted);
  const std::size_t k = std::min(sorted.size(), std::max<std::size_t>(4, t.tail_points));
  a.lower = trend_fit({sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k)});
  a.upper = trend_fit({sorted.end() - static_cast<std::ptrdiff_t>(k), sorted.end()});
  const bool enough = sorted.size() >= t.min_scales;
  const bool up = a.upper.slope > t.slope && a.upper.r_squared > t.r_squared;
  const bool down = a.lower.slope < -t.slope && a.lower.r_squared > t.r_squared;
  if (enough && (up || down)) {
    a.verdict = VerdictKind::Diverging;
    a.growth_slope = std::max(up ? a.upper.slope : 0.0, down ? -a.lower.slope : 0.0);
  } else if (a.upper.slope <= t.slope && a.lower.slope >= -t.slope) {
    a.verdict = VerdictKind::Bounded;
  }
  return a;
}

}  // namespace polarity
