#include <cmath>

#include "polarity/conditions.hpp"
#include "polarity/errors.hpp"

namespace polarity {

RegionSpec inherited_region(const Exponents& e, RegionCase which, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
  RegionSpec r;
  r.which = which;
  r.p0 = e.p;
  r.q0 = e.q;
  r.radius = radius;
  constexpr double tol = 1e-12;
  if (which == RegionCase::A) {
    if (e.p_conj < e.q - tol) fail(ErrorCode::CaseMismatch, "case a needs p0' >= q0");
    r.slope = -e.p_conj / e.q;
    r.intercept = e.p_conj / e.q;
    r.degenerate = std::abs(e.p - 2.0) <= tol;
  } else {
    if (e.p_conj > e.q + tol) fail(ErrorCode::CaseMismatch, "case b needs p0' <= q0");
    r.slope = -e.p / e.q_conj;
    r.intercept = 1.0;
    r.degenerate = std::abs(e.q - 2.0) <= tol;
  }
  r.center_x = 1.0 / e.p;
  r.center_y = 1.0 / e.q;
  r.center_on_line = std::abs(r.slope * r.center_x + r.intercept - r.center_y) <= 1e-12;

  const double m = r.slope, b = r.intercept;  // m < 0
  const double half_dx = radius / std::sqrt(1.0 + m * m);
  double lo = r.center_x - half_dx, hi = r.center_x + half_dx;  // open disk
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  lo = std::max(lo, (1.0 - b) / m);  // y < 1
  hi = std::min(hi, -b / m);         // y > 0
  lo = std::max(lo, b / (1.0 - m));  // y <= x
  r.x_lo = lo;
  r.x_hi = hi;
  r.y_lo = m * lo + b;
  r.y_hi = m * hi + b;
  r.nonempty = hi - lo > 1e-12;
  r.center_interior = r.nonempty && r.center_x > lo + 1e-12 && r.center_x < hi - 1e-12;
  return r;
}

SufficiencyReport classify_sufficiency(const WeightPair& pair, const Exponents& e,
                                       const ConditionSampling& cs, const ComparabilitySampling& comp) {
  if (e.p > e.q) fail(ErrorCode::ExponentOutOfRange, "sufficiency needs 1 < p <= q");
  SufficiencyReport rep;
  rep.which = e.p_conj >= e.q ? RegionCase::A : RegionCase::B;
  rep.delta = rep.which == RegionCase::A ? e.q / e.p_conj : e.q_conj / e.p;
  rep.side_condition = rep.which == RegionCase::A ? std::abs(e.p - 2.0) > 1e-12 : std::abs(e.q - 2.0) > 1e-12;
  if (!rep.side_condition)
    rep.reasons.push_back(rep.which == RegionCase::A ? "side condition p != 2 fails" : "side condition q != 2 fails");

  rep.condition = check_condition(pair, e, Family::Cubes, cs);
  rep.condition_bounded = rep.condition.verdict == VerdictKind::Bounded;
  if (!rep.condition_bounded)
    rep.reasons.push_back(std::string("cube condition verdict is ") + verdict_name(rep.condition.verdict));

  ComparabilitySampling c = comp;
  c.dim = pair.dim;
  const Weight lebesgue = Weight::constant(1.0);
  rep.comparability = rep.which == RegionCase::A ? check_comparability(pair.u, lebesgue, rep.delta, c)
                                                 : check_comparability(lebesgue, pair.v, rep.delta, c);
  const auto& cr = rep.comparability;
  rep.comparability_bounded = std::isfinite(cr.c_estimate) && cr.c_estimate <= rep.comparability_cap &&
                              (!cr.assessment || cr.assessment->verdict == VerdictKind::Bounded);
  if (!rep.comparability_bounded) rep.reasons.push_back("comparability constant is not bounded on the sampled cubes");
  rep.applicable = rep.side_condition && rep.condition_bounded && rep.comparability_bounded;
  return rep;
}

}  // namespace polarity
