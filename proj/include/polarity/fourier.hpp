#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "polarity/geometry.hpp"
#include "polarity/weights.hpp"

namespace polarity {

using Complex = std::complex<double>;

struct SimpleTerm {
  Complex coef{1.0, 0.0};
  TranslatedBody region;
};

// f = sum c_i 1_{R_i} with pairwise disjoint regions.
struct SimpleFunction {
  std::vector<SimpleTerm> terms;

  static SimpleFunction indicator(const TranslatedBody& region, Complex coef = 1.0);
  int dim() const;
  SimpleFunction scaled(Complex c) const;
  // f(lambda x): every region scaled by 1/lambda.
  SimpleFunction dilated(double lambda) const;
  double l1_norm() const;
  // integral of |f|^p v
  Estimate weighted_power_integral(double p, const Weight& v, const IntegrateOptions& opts = {}) const;
  Bounds support() const;
};

// Throws InvalidArgument when sampled points of one region fall inside another.
void check_disjoint(const SimpleFunction& f, std::size_t samples_per_pair = 1000, std::uint64_t seed = 0);

struct QuadratureOptions {
  int initial_order = 8;
  int max_order = 256;
  double tolerance = 1e-4;  // sup-norm difference between successive orders
};

// Gauss-Legendre nodes and weights on [0, 1].
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

// Transform of one region at many frequencies, f^(z) = int e^{-i x.z} dx.
// Boxes, ellipsoids and intervals use closed forms; other polytopes use
// simplex quadrature with order doubling.
std::vector<Complex> region_transform(const TranslatedBody& region, const std::vector<Vec>& zs,
                                      const QuadratureOptions& q = {});
std::vector<Complex> transform_at(const SimpleFunction& f, const std::vector<Vec>& zs, const QuadratureOptions& q = {});

// Cell-centred grid: nodes lo + (k + 1/2) h per axis.
struct GridSpec {
  Vec lo;
  Vec hi;
  std::vector<int> shape;

  static GridSpec centred(int dim, double half_width, int nodes_per_axis);
  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  double cell_volume() const;
  Vec node(std::size_t index) const;
  // Distance of node to the domain boundary, as a fraction of the half width
  // on the worst axis; nodes with a value below 0.05 form the outer shell.
  bool in_outer_shell(std::size_t index, double fraction = 0.05) const;
};

struct GridFunction {
  GridSpec grid;
  std::vector<Complex> values;
};

GridFunction fourier_transform(const SimpleFunction& f, const GridSpec& grid, const QuadratureOptions& q = {});

struct LowerBoundReport {
  double min_ratio = 0.0;
  Vec argmin;
  std::size_t samples = 0;
  double volume = 0.0;
  bool passed = false;
};

// min over z in E° (plus z = 0) of |1_E^(z)| / (cos(1) |E|).
LowerBoundReport lower_bound_check(const TranslatedBody& e, std::size_t samples, std::uint64_t seed,
                                   const QuadratureOptions& q = {});

struct AutoGridOptions {
  std::optional<GridSpec> fixed;   // use this grid instead of the automatic one
  double spacing_factor = 1.0;     // node spacing pi / (4 X spacing_factor)
  double initial_half_width = 0.0; // 0: 16 pi / rho
  int max_nodes_per_axis = 4096;
  std::size_t max_total_nodes = std::size_t{1} << 22;
  double relative_tolerance = 1e-3;
  double shell_fraction = 0.01;
  int alpha_levels = 64;
  QuadratureOptions quadrature;
};

struct LevelSetReport {
  std::vector<double> alphas;
  std::vector<double> measures;     // u(E_alpha) inside the grid
  double sup_quantity = 0.0;        // max over the alpha grid of alpha u(E_alpha)^{1/q}
  double sup_alpha = 0.0;
  double sup_refined = 0.0;         // exact sup over alpha >= alpha_min for the discrete level sets
  double sup_refined_alpha = 0.0;
  double l1_norm = 0.0;
  Estimate v_measure;               // v(A)
  double ratio = 0.0;               // sup_refined / v(A)^{1/p}
  double shell_fraction = 0.0;
  GridSpec grid;
};

LevelSetReport restricted_weak_type(const WeightPair& pair, const Exponents& e, const TranslatedBody& a,
                                    const AutoGridOptions& g = {}, const IntegrateOptions& io = {});

struct StrongTypeRow {
  std::string label;
  double numerator = 0.0;    // (int |f^|^q u)^{1/q}
  double denominator = 0.0;  // (int |f|^p v)^{1/p}
  double ratio = 0.0;
  GridSpec grid;
};

struct StrongTypeReport {
  double max_ratio = 0.0;
  std::vector<StrongTypeRow> rows;
};

StrongTypeReport strong_type_ratio(const WeightPair& pair, const Exponents& e, const std::vector<SimpleFunction>& fs,
                                   const AutoGridOptions& g = {}, const IntegrateOptions& io = {});

struct HausdorffYoungReport {
  double lhs = 0.0;                  // ||f^||_{p'}
  double rhs_without_constant = 0.0; // ||f||_p
  double ratio = 0.0;
  GridSpec grid;
};

HausdorffYoungReport hausdorff_young_check(const SimpleFunction& f, double p, const AutoGridOptions& g = {});

}  // namespace polarity
