#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polarity/estimate.hpp"

namespace polarity {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kMembershipSlack = 1e-9;
inline constexpr double kOrthogonalityTol = 1e-9;
inline constexpr int kMaxMonteCarloDim = 6;
inline constexpr int kMaxExactPolytopeDim = 3;
inline constexpr std::uint64_t kMinMonteCarloSamples = 1000;

// {x : |R^T (x - center)|_i <= half_extents_i}
struct Box {
  Vec center;
  Vec half_extents;
  Mat rotation;  // columns are the box axes
};

// {x : (x - center)^T shape (x - center) <= 1}
struct Ellipsoid {
  Vec center;
  Mat shape;
};

// Convex hull of {+g_i, -g_i}; generators are the rows.
struct SymPolytopeV {
  Mat generators;
};

// Intersection of {x : normals.row(i) . x <= offsets(i)}, offsets > 0.
struct PolytopeH {
  Mat normals;
  Vec offsets;
};

// Facet/vertex description shared by the two polytope variants. Facets are
// stored as normals.row(j) . x <= offsets(j).
struct PolytopeData {
  Mat vertices;
  Mat facet_normals;
  Vec facet_offsets;
};

struct Bounds {
  Vec lo;
  Vec hi;
  double volume() const;
};

class Body {
 public:
  using Variant = std::variant<Box, Ellipsoid, SymPolytopeV, PolytopeH>;

  static Body box(Vec center, Vec half_extents, Mat rotation);
  static Body box(Vec center, Vec half_extents);
  static Body cube(int dim, double half_side, const Vec& center = Vec());
  static Body ellipsoid(Vec center, Mat shape);
  static Body ball(int dim, double radius, const Vec& center = Vec());
  static Body sym_polytope(Mat generators);
  static Body h_polytope(Mat normals, Vec offsets);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&variant_);
  }
  std::string variant_name() const;

  // Symmetric about the origin: x in E implies -x in E.
  bool is_origin_symmetric() const;
  // Facets and vertices for the polytope variants; computed on first use.
  const PolytopeData& polytope() const;

 private:
  struct Cache;
  Body(Variant v, int dim);

  Variant variant_;
  int dim_ = 0;
  std::shared_ptr<Cache> cache_;
};

// base + shift. Every operation that accepts a region accepts this type; a
// plain Body converts implicitly with a zero shift.
struct TranslatedBody {
  Body base;
  Vec shift;

  TranslatedBody(const Body& b);  // NOLINT(google-explicit-constructor)
  TranslatedBody(Body b, Vec s);
  int dim() const { return base.dim(); }
  bool has_shift() const;
};

bool contains(const Body& body, const Vec& x);
bool contains(const TranslatedBody& region, const Vec& x);

TranslatedBody translate(const Body& body, const Vec& t);
TranslatedBody translate(const TranslatedBody& region, const Vec& t);

// Folds a shift into the centre for box/ellipsoid; polytopes stay wrapped.
TranslatedBody normalize(const TranslatedBody& region);

// Homothety about the origin, k > 0.
Body scaled(const Body& body, double k);
TranslatedBody scaled(const TranslatedBody& region, double k);

// Polar {z : |x.z| <= 1 for all x in E}. The region must contain the origin
// in its interior.
Body polar(const Body& body);
Body polar(const TranslatedBody& region);

// (E + mu)° + tau, with -mu in E.
TranslatedBody translated_polar(const TranslatedBody& e, const Vec& mu, const Vec& tau);

Bounds bounding_box(const Body& body);
Bounds bounding_box(const TranslatedBody& region);

// 1D regions are intervals; returns [lo, hi].
std::pair<double, double> interval_of(const TranslatedBody& region);
bool is_axis_aligned_box(const TranslatedBody& region);

double unit_ball_volume(int n);

enum class VolumeMethod { Auto, Exact, MonteCarlo };

struct VolumeOptions {
  VolumeMethod method = VolumeMethod::Auto;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;
};

std::optional<double> exact_volume(const Body& body);
VolumeEstimate volume(const TranslatedBody& region, const VolumeOptions& opts = {});
VolumeEstimate mahler_volume(const Body& body, const VolumeOptions& opts = {});

struct JohnResult {
  Body inner;             // S with S inside the body
  Body outer;             // minimum-volume enclosing ellipsoid (approximate)
  double factor = 0.0;    // body inside factor * S; factor <= sqrt(n)(1 + tol)
  int iterations = 0;
  bool verified = false;  // vertex and boundary-sample containment checks passed
};

JohnResult loewner_john(const Body& sym_polytope, double tolerance = 1e-3,
                        int max_iterations = 100000, std::uint64_t seed = 0);

// Box R aligned with the principal axes of an origin-centred ellipsoid S,
// with R inside S inside sqrt(n) R.
Body rect_ellipsoid_sandwich(const Body& ellipsoid);

// Uniform samples by rejection from the bounding box.
std::vector<Vec> sample_uniform(const TranslatedBody& region, std::size_t count,
                                std::uint64_t seed);

}  // namespace polarity
