#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarity/geometry.hpp"
#include "polarity/trend.hpp"
#include "polarity/weights.hpp"

namespace polarity {

enum class Family { Cubes, Rectanguloids, Ellipsoids, SymPolytopes };
const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct ConditionSampling {
  std::vector<double> scales;     // body half-size L; defaults to 2^-8 .. 2^8
  int samples_per_scale = 8;      // random (centre, mu, tau) triples after the centred one
  std::uint64_t seed = 0;
  IntegrateOptions integrate;     // method and budget for every weighted measure
  VerdictThresholds thresholds;

  static std::vector<double> dyadic_scales(int lo_exp, int hi_exp);
};

// One sampled configuration: E = body, F = (E + mu)° + tau.
struct Configuration {
  TranslatedBody body;
  Vec mu;
  Vec tau;
};

struct TrendPoint {
  double scale = 0.0;  // index of the trend (L or 1/L)
  double value = 0.0;
  double body_scale = 0.0;  // the L the value came from
};

struct TrendSeries {
  std::string name;
  std::vector<TrendPoint> points;
  std::optional<TrendAssessment> assessment;
};

struct ConditionReport {
  std::string condition;   // "N" or "N_Q'"
  Family family = Family::Cubes;
  double sup_estimate = 0.0;
  Estimate sup;            // with error
  std::optional<Configuration> witness;
  std::string witness_product;  // which product attained the sup
  std::vector<TrendSeries> trends;
  VerdictKind verdict = VerdictKind::Inconclusive;
  double slope = 0.0;       // full-range slope of the primary trend
  double r_squared = 1.0;
  double growth_slope = 0.0;
  std::size_t configurations = 0;
  // u(sqrt(n) A)/u(A) and w(sqrt(n) A)/w(A) for the centred body at each scale.
  std::vector<std::pair<double, double>> sqrt_n_ratio_u;
  std::vector<std::pair<double, double>> sqrt_n_ratio_w;
  // Per configuration: the two products, for property checks.
  struct Row {
    double body_scale;
    Estimate first;   // product indexed by L (N) or by 1/L (N_Q')
    Estimate second;  // the interchanged product
    double polar_volume_ratio;  // |Q°| / |F| (N_Q' only)
  };
  std::vector<Row> rows;
  std::vector<std::string> warnings;
};

// Sampled configurations for one family; the centred configuration comes first
// at every scale.
std::vector<std::vector<Configuration>> sample_configurations(int dim, Family family, const ConditionSampling& s);

// Products u((E+mu)°+tau)^{1/q} w(E)^{1/p'} and u(E)^{1/q} w((E+mu)°+tau)^{1/p'}.
ConditionReport check_condition(const WeightPair& pair, const Exponents& exps, Family family,
                                const ConditionSampling& sampling);

// Products u(Q)^{1/q}|Q°| / v((Q+mu)°+tau)^{1/p} and u((Q+mu)°+tau)^{1/q}|Q| / v(Q)^{1/p}.
ConditionReport check_nq_prime(const WeightPair& pair, const Exponents& exps, const ConditionSampling& sampling);

enum class SubsetMode { Corners, Dyadic, Both };

struct ComparabilitySampling {
  int dim = 1;
  std::vector<double> half_sides;   // defaults to 2^-4 .. 2^4
  std::vector<Vec> centers;         // explicit centres, in units of the half side
  int random_centers = 4;           // extra centres uniform in [-1,1]^n (times the half side)
  bool include_origin = true;
  SubsetMode subsets = SubsetMode::Both;
  int corner_fractions = 16;        // t = k / corner_fractions
  int dyadic_depth = 4;
  int unions_per_depth = 8;
  std::uint64_t seed = 0;
  IntegrateOptions integrate;
  double doubling_cap = 0.0;        // 0: 2^n * 64
  VerdictThresholds thresholds;
};

struct ComparabilityReport {
  double c_estimate = 0.0;
  double delta = 1.0;
  Vec witness_center;
  double witness_half_side = 0.0;
  std::string witness_subset;
  double witness_mu1_ratio = 0.0;
  double witness_mu2_ratio = 0.0;
  std::vector<std::pair<double, double>> per_scale;  // (half side, max C)
  std::optional<TrendAssessment> assessment;
  bool mu1_doubling = false;
  bool mu2_doubling = false;
  std::size_t subsets = 0;
  std::vector<std::string> warnings;
};

// max over sampled E inside Q of [mu1(E)/mu1(Q)] / [mu2(E)/mu2(Q)]^delta.
ComparabilityReport check_comparability(const Weight& mu1, const Weight& mu2, double delta,
                                        const ComparabilitySampling& sampling);

// (log 2 / 2) / (n log 2 + log(2C) / delta).
double epsilon_of_delta(double delta, double c, int n);

struct ReverseHolderReport {
  double c_estimate = 0.0;
  bool diverged = false;
  std::string divergence;
  Vec witness_center;
  double witness_half_side = 0.0;
  std::vector<std::pair<double, double>> per_scale;
};

// max over cubes of avg(sigma^{1+eps})^{1/(1+eps)} / avg(sigma), averages
// against mu1.
ReverseHolderReport reverse_holder_check(const Weight& mu1, const Weight& sigma, double epsilon,
                                         const ComparabilitySampling& cubes);

enum class RegionCase { A, B };

struct RegionSpec {
  RegionCase which = RegionCase::A;
  double p0 = 2.0, q0 = 2.0;
  double slope = 0.0;      // line y = slope * x + intercept
  double intercept = 0.0;
  double center_x = 0.0, center_y = 0.0;
  double radius = 0.05;
  bool center_on_line = false;
  // Intersection of the line with the open disk, the triangle {y <= x} and
  // the open unit square, as an x-interval.
  bool nonempty = false;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
  bool center_interior = false;  // the centre lies strictly inside the segment
  bool degenerate = false;       // side condition fails: p0 = 2 (case a) or q0 = 2 (case b)
};

RegionSpec inherited_region(const Exponents& exps0, RegionCase which, double radius = 0.05);

struct SufficiencyReport {
  bool applicable = false;
  RegionCase which = RegionCase::A;
  double delta = 1.0;
  bool side_condition = false;
  bool condition_bounded = false;
  bool comparability_bounded = false;
  double comparability_cap = 1e3;
  ConditionReport condition;
  ComparabilityReport comparability;
  std::vector<std::string> reasons;
};

SufficiencyReport classify_sufficiency(const WeightPair& pair, const Exponents& exps,
                                       const ConditionSampling& condition_sampling,
                                       const ComparabilitySampling& comparability_sampling);

}  // namespace polarity
