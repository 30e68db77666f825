#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polarity/geometry.hpp"

namespace polarity {

double conjugate(double p);

struct Exponents {
  double p = 2.0;
  double q = 2.0;
  double p_conj = 2.0;
  double q_conj = 2.0;
  double s = 2.0;  // max(p', q)

  static Exponents make(double p, double q);
  // (q', p'): the exponents of the adjoint inequality.
  Exponents swapped() const;
};

// Immutable weight descriptor. Copies share the underlying node.
class Weight {
 public:
  enum class Kind { Constant, Power, Aniso, Grid, Product, Scaled, Translated, Pow };

  struct GridData {
    Vec lo;
    Vec hi;
    std::vector<int> shape;      // nodes per axis, >= 2
    std::vector<double> values;  // row-major, last axis fastest
  };

  static Weight constant(double c);
  // |x|^alpha on R^dim; requires alpha > -dim.
  static Weight power(double alpha, int dim);
  // prod |x_i|^{alpha_i}; requires every alpha_i > -1.
  static Weight aniso(Vec alphas);
  // Multilinear interpolation of node values on the vertex grid of [lo, hi];
  // zero outside.
  static Weight grid(Vec lo, Vec hi, std::vector<int> shape, std::vector<double> values);
  static Weight grid_from(Vec lo, Vec hi, std::vector<int> shape, const std::function<double(const Vec&)>& f);
  static Weight product(std::vector<Weight> factors);
  static Weight scaled(double c, const Weight& w);
  // x -> w(x + shift)
  static Weight translated(Vec shift, const Weight& w);
  // x -> w(x)^e, simplified where a closed form exists.
  static Weight pow(const Weight& w, double e);

  Kind kind() const;
  // Ambient dimension, or 0 for weights defined in every dimension.
  int dim() const;
  double operator()(const Vec& x) const;

  double constant_value() const;          // Constant
  double alpha() const;                   // Power
  const Vec& alphas() const;              // Aniso
  const GridData& grid_data() const;      // Grid
  const std::vector<Weight>& factors() const;  // Product
  double scale() const;                   // Scaled
  const Vec& shift() const;               // Translated
  double exponent() const;                // Pow
  const Weight& inner() const;            // Scaled, Translated, Pow

  // Locally integrable on R^dim (dim = 0 uses the weight's own dimension).
  bool locally_integrable(int dim = 0) const;
  bool is_zero() const;
  std::string describe() const;

  struct Node;  // opaque
  explicit Weight(std::shared_ptr<const Node> node);

 private:
  std::shared_ptr<const Node> node_;
};

struct DualWeight {
  Weight w;
  bool locally_integrable = true;
  std::string warning;
};

// w = v^{-p'/p}.
DualWeight dual_weight(const Weight& v, const Exponents& exps, int dim = 0);

struct WeightPair {
  Weight u;
  Weight v;
  Weight w;
  int dim = 1;
  std::vector<std::string> warnings;

  static WeightPair from_uv(const Weight& u, const Weight& v, const Exponents& exps, int dim);
  static WeightPair from_uw(const Weight& u, const Weight& w, const Exponents& exps, int dim);
};

using IntegrateOptions = VolumeOptions;

// u(E) = integral of u over the region.
MeasureEstimate integrate(const Weight& u, const TranslatedBody& region, const IntegrateOptions& opts = {});

// Integral of |t|^alpha over [a, b]; throws NonIntegrableSingularity when
// alpha <= -1 and 0 is in [a, b].
double power_integral_1d(double alpha, double a, double b);

struct DoublingOptions {
  int dim = 1;
  std::vector<double> half_sides{0.125, 0.25, 0.5, 1.0, 2.0};
  int centers = 16;                // random centres per scale, plus the origin
  double center_range = 4.0;       // centres uniform in [-range, range]^n
  bool include_origin = true;
  IntegrateOptions integrate;
};

struct DoublingReport {
  bool passed = false;
  double max_ratio = 0.0;
  Vec witness_center;
  double witness_half_side = 0.0;
  std::size_t cubes = 0;
};

DoublingReport is_doubling(const Weight& u, double c_cap, const DoublingOptions& opts);

}  // namespace polarity
