#include "polarity/geometry.hpp"

#include <cmath>
#include <mutex>

#include "polarity/errors.hpp"
#include "polarity/random.hpp"
#include "polytope_internal.hpp"

namespace polarity {

struct Body::Cache {
  std::once_flag once;
  PolytopeData data;
};

namespace {

void check_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

void check_dim(Eigen::Index got, int want, const char* what) {
  if (got != want)
    fail(ErrorCode::DimensionMismatch, std::string(what) + " has size " + std::to_string(got) +
                                           ", expected " + std::to_string(want));
}

Vec zero_if_empty(const Vec& v, int n) { return v.size() == 0 ? Vec::Zero(n) : v; }

}  // namespace

double Bounds::volume() const { return (hi - lo).prod(); }

Body::Body(Variant v, int dim) : variant_(std::move(v)), dim_(dim), cache_(std::make_shared<Cache>()) {}

Body Body::box(Vec center, Vec half_extents, Mat rotation) {
  const int n = static_cast<int>(half_extents.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "box dimension must be >= 1");
  check_dim(center.size(), n, "box center");
  check_dim(rotation.rows(), n, "box rotation");
  check_dim(rotation.cols(), n, "box rotation");
  check_finite(center, "box center");
  check_finite(rotation, "box rotation");
  if (!half_extents.allFinite() || (half_extents.array() <= 0.0).any())
    fail(ErrorCode::InvalidArgument, "box half extents must be finite and positive");
  double orth = (rotation.transpose() * rotation - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (orth > kOrthogonalityTol) fail(ErrorCode::InvalidArgument, "box rotation is not orthogonal");
  return Body(Box{std::move(center), std::move(half_extents), std::move(rotation)}, n);
}

Body Body::box(Vec center, Vec half_extents) {
  const auto n = half_extents.size();
  return box(std::move(center), std::move(half_extents), Mat::Identity(n, n));
}

Body Body::cube(int dim, double half_side, const Vec& center) {
  return box(zero_if_empty(center, dim), Vec::Constant(dim, half_side));
}

Body Body::ellipsoid(Vec center, Mat shape) {
  const int n = static_cast<int>(shape.rows());
  if (n < 1) fail(ErrorCode::InvalidArgument, "ellipsoid dimension must be >= 1");
  check_dim(shape.cols(), n, "ellipsoid shape");
  check_dim(center.size(), n, "ellipsoid center");
  check_finite(center, "ellipsoid center");
  check_finite(shape, "ellipsoid shape");
  double asym = (shape - shape.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, shape.cwiseAbs().maxCoeff()))
    fail(ErrorCode::InvalidArgument, "ellipsoid shape must be symmetric");
  Mat sym = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::UnboundedBody, "ellipsoid shape must be positive definite");
  return Body(Ellipsoid{std::move(center), std::move(sym)}, n);
}

Body Body::ball(int dim, double radius, const Vec& center) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  return ellipsoid(zero_if_empty(center, dim), Mat::Identity(dim, dim) / (radius * radius));
}

Body Body::sym_polytope(Mat generators) {
  const int n = static_cast<int>(generators.cols());
  if (n < 1 || generators.rows() < 1) fail(ErrorCode::InvalidArgument, "empty generator list");
  check_finite(generators, "generators");
  Eigen::FullPivLU<Mat> lu(generators);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) fail(ErrorCode::DegenerateGenerators, "generators do not span R^n");
  return Body(SymPolytopeV{std::move(generators)}, n);
}

Body Body::h_polytope(Mat normals, Vec offsets) {
  const int n = static_cast<int>(normals.cols());
  if (n < 1 || normals.rows() < 1) fail(ErrorCode::InvalidArgument, "empty halfspace list");
  check_dim(offsets.size(), static_cast<int>(normals.rows()), "offsets");
  check_finite(normals, "normals");
  check_finite(offsets, "offsets");
  if ((offsets.array() <= 0.0).any()) fail(ErrorCode::InvalidArgument, "halfspace offsets must be positive");
  for (Eigen::Index i = 0; i < normals.rows(); ++i)
    if (normals.row(i).norm() == 0.0) fail(ErrorCode::InvalidArgument, "zero halfspace normal");
  if (!detail::h_is_bounded(normals)) fail(ErrorCode::UnboundedBody, "halfspace intersection is unbounded");
  return Body(PolytopeH{std::move(normals), std::move(offsets)}, n);
}

std::string Body::variant_name() const {
  switch (variant_.index()) {
    case 0: return "box";
    case 1: return "ellipsoid";
    case 2: return "sympoly_v";
    default: return "poly_h";
  }
}

const PolytopeData& Body::polytope() const {
  if (!get_if<SymPolytopeV>() && !get_if<PolytopeH>())
    fail(ErrorCode::InvalidArgument, "polytope data requested for a " + variant_name());
  std::call_once(cache_->once, [this] {
    if (const auto* v = get_if<SymPolytopeV>())
      cache_->data = detail::symmetric_hull(v->generators);
    else {
      const auto* h = get_if<PolytopeH>();
      cache_->data = detail::h_vertices(h->normals, h->offsets);
    }
  });
  return cache_->data;
}

bool Body::is_origin_symmetric() const {
  if (const auto* b = get_if<Box>()) return b->center.norm() <= 1e-12 * (1.0 + b->half_extents.maxCoeff());
  if (const auto* e = get_if<Ellipsoid>()) return e->center.norm() <= 1e-12;
  if (get_if<SymPolytopeV>()) return true;
  const auto* h = get_if<PolytopeH>();
  const Eigen::Index m = h->normals.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    Vec a = h->normals.row(i).transpose() / h->offsets(i);
    bool found = false;
    for (Eigen::Index j = 0; j < m && !found; ++j) {
      Vec b = h->normals.row(j).transpose() / h->offsets(j);
      found = (a + b).norm() <= 1e-9 * std::max(1.0, a.norm());
    }
    if (!found) return false;
  }
  return true;
}

TranslatedBody::TranslatedBody(const Body& b) : base(b), shift(Vec::Zero(b.dim())) {}

TranslatedBody::TranslatedBody(Body b, Vec s) : base(std::move(b)), shift(std::move(s)) {
  if (shift.size() == 0) shift = Vec::Zero(base.dim());
  check_dim(shift.size(), base.dim(), "translation");
  check_finite(shift, "translation");
}

bool TranslatedBody::has_shift() const { return shift.size() > 0 && shift.cwiseAbs().maxCoeff() > 0.0; }

bool contains(const Body& body, const Vec& x) {
  check_dim(x.size(), body.dim(), "point");
  if (const auto* b = body.get_if<Box>()) {
    Vec y = b->rotation.transpose() * (x - b->center);
    return ((y.cwiseAbs() - b->half_extents).array() <= kMembershipSlack).all();
  }
  if (const auto* e = body.get_if<Ellipsoid>()) {
    Vec d = x - e->center;
    return d.dot(e->shape * d) <= 1.0 + kMembershipSlack;
  }
  if (const auto* h = body.get_if<PolytopeH>()) {
    return ((h->normals * x - h->offsets).array() <= kMembershipSlack).all();
  }
  const auto& data = body.polytope();
  return ((data.facet_normals * x - data.facet_offsets).array() <= kMembershipSlack).all();
}

bool contains(const TranslatedBody& region, const Vec& x) { return contains(region.base, x - region.shift); }

TranslatedBody translate(const Body& body, const Vec& t) { return TranslatedBody(body, t); }

TranslatedBody translate(const TranslatedBody& region, const Vec& t) {
  check_dim(t.size(), region.dim(), "translation");
  return TranslatedBody(region.base, region.shift + t);
}

TranslatedBody normalize(const TranslatedBody& region) {
  if (!region.has_shift()) return region;
  if (const auto* b = region.base.get_if<Box>())
    return TranslatedBody(Body::box(b->center + region.shift, b->half_extents, b->rotation));
  if (const auto* e = region.base.get_if<Ellipsoid>())
    return TranslatedBody(Body::ellipsoid(e->center + region.shift, e->shape));
  return region;
}

Body scaled(const Body& body, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
  if (const auto* b = body.get_if<Box>()) return Body::box(k * b->center, k * b->half_extents, b->rotation);
  if (const auto* e = body.get_if<Ellipsoid>()) return Body::ellipsoid(k * e->center, e->shape / (k * k));
  if (const auto* v = body.get_if<SymPolytopeV>()) return Body::sym_polytope(k * v->generators);
  const auto* h = body.get_if<PolytopeH>();
  return Body::h_polytope(h->normals, k * h->offsets);
}

TranslatedBody scaled(const TranslatedBody& region, double k) {
  return TranslatedBody(scaled(region.base, k), k * region.shift);
}

namespace {

// Interior test with a relative margin; the polar of a body with the origin
// on its boundary is unbounded.
void require_origin_interior(const TranslatedBody& region) {
  const int n = region.dim();
  Vec o = Vec::Zero(n) - region.shift;
  const Body& body = region.base;
  if (!contains(body, o)) fail(ErrorCode::BodyNotContainingOrigin, "polar requires the origin inside the body");
  bool interior = true;
  if (const auto* b = body.get_if<Box>()) {
    Vec y = b->rotation.transpose() * (o - b->center);
    interior = ((b->half_extents - y.cwiseAbs()).array() > 1e-12 * b->half_extents.maxCoeff()).all();
  } else if (const auto* e = body.get_if<Ellipsoid>()) {
    Vec d = o - e->center;
    interior = d.dot(e->shape * d) < 1.0 - 1e-12;
  } else {
    const auto& data = body.polytope();
    interior = ((data.facet_offsets - data.facet_normals * o).array() > 1e-12 * data.facet_offsets.maxCoeff()).all();
  }
  if (!interior) fail(ErrorCode::UnboundedBody, "origin lies on the boundary; the polar is unbounded");
}

// {z : |v.z| <= 1} for the given vertex rows.
Body polar_of_vertices(const Mat& vertices) {
  const int n = static_cast<int>(vertices.cols());
  std::vector<Vec> rows;
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) {
    Vec v = vertices.row(i).transpose();
    if (v.norm() <= 1e-14) continue;
    bool dup = false;
    for (const auto& r : rows)
      if ((r - v).norm() <= 1e-12 * std::max(1.0, v.norm()) || (r + v).norm() <= 1e-12 * std::max(1.0, v.norm()))
        dup = true;
    if (!dup) rows.push_back(v);
  }
  Mat normals(2 * static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    normals.row(static_cast<Eigen::Index>(2 * i)) = rows[i].transpose();
    normals.row(static_cast<Eigen::Index>(2 * i + 1)) = -rows[i].transpose();
  }
  return Body::h_polytope(normals, Vec::Ones(normals.rows()));
}

}  // namespace

Body polar(const Body& body) { return polar(TranslatedBody(body)); }

Body polar(const TranslatedBody& input) {
  TranslatedBody region = normalize(input);
  require_origin_interior(region);
  const Body& body = region.base;
  const int n = body.dim();
  const bool centred = !region.has_shift() && body.is_origin_symmetric();

  if (const auto* b = body.get_if<Box>()) {
    if (centred) {
      Mat gens(n, n);
      for (int i = 0; i < n; ++i) gens.row(i) = (b->rotation.col(i) / b->half_extents(i)).transpose();
      return Body::sym_polytope(gens);
    }
    return polar_of_vertices(detail::region_vertices(region));
  }
  if (const auto* e = body.get_if<Ellipsoid>()) {
    if (!centred)
      fail(ErrorCode::NonSymmetricBody, "polar of an ellipsoid is supported only when it is centred at the origin");
    return Body::ellipsoid(Vec::Zero(n), e->shape.inverse());
  }
  if (const auto* v = body.get_if<SymPolytopeV>()) {
    if (centred) return Body::h_polytope(
        [&] {
          Mat normals(2 * v->generators.rows(), n);
          normals << v->generators, -v->generators;
          return normals;
        }(),
        Vec::Ones(2 * v->generators.rows()));
    return polar_of_vertices(detail::region_vertices(region));
  }
  const auto* h = body.get_if<PolytopeH>();
  if (!body.is_origin_symmetric())
    fail(ErrorCode::NonSymmetricHPolytope, "polar of a non-symmetric H-polytope; re-centre it first");
  if (!region.has_shift()) {
    Mat gens(h->normals.rows(), n);
    for (Eigen::Index i = 0; i < h->normals.rows(); ++i) gens.row(i) = h->normals.row(i) / h->offsets(i);
    return Body::sym_polytope(gens);
  }
  return polar_of_vertices(detail::region_vertices(region));
}

TranslatedBody translated_polar(const TranslatedBody& e, const Vec& mu, const Vec& tau) {
  if (!contains(e, -mu)) fail(ErrorCode::BodyNotContainingOrigin, "-mu must lie in E");
  return TranslatedBody(polar(translate(e, mu)), tau);
}

Bounds bounding_box(const Body& body) {
  const int n = body.dim();
  Bounds bb;
  if (const auto* b = body.get_if<Box>()) {
    Vec ext = b->rotation.cwiseAbs() * b->half_extents;
    bb.lo = b->center - ext;
    bb.hi = b->center + ext;
  } else if (const auto* e = body.get_if<Ellipsoid>()) {
    Vec ext = e->shape.inverse().diagonal().cwiseSqrt();
    bb.lo = e->center - ext;
    bb.hi = e->center + ext;
  } else if (const auto* v = body.get_if<SymPolytopeV>()) {
    Vec ext = v->generators.cwiseAbs().colwise().maxCoeff().transpose();
    bb.lo = -ext;
    bb.hi = ext;
  } else {
    const auto& d = body.polytope();
    if (d.vertices.rows() == 0) fail(ErrorCode::UnboundedBody, "polytope has no vertices");
    bb.lo = d.vertices.colwise().minCoeff().transpose();
    bb.hi = d.vertices.colwise().maxCoeff().transpose();
  }
  (void)n;
  return bb;
}

Bounds bounding_box(const TranslatedBody& region) {
  Bounds bb = bounding_box(region.base);
  bb.lo += region.shift;
  bb.hi += region.shift;
  return bb;
}

std::pair<double, double> interval_of(const TranslatedBody& region) {
  if (region.dim() != 1) fail(ErrorCode::DimensionMismatch, "interval_of needs a 1D region");
  Bounds bb = bounding_box(region);
  return {bb.lo(0), bb.hi(0)};
}

bool is_axis_aligned_box(const TranslatedBody& region) {
  if (region.dim() == 1) return true;
  const auto* b = region.base.get_if<Box>();
  if (!b) return false;
  const int n = region.dim();
  return (b->rotation - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12;
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

std::vector<Vec> sample_uniform(const TranslatedBody& region, std::size_t count, std::uint64_t seed) {
  Bounds bb = bounding_box(region);
  const int n = region.dim();
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * count + 100000;
  Vec x(n);
  while (out.size() < count) {
    if (++attempts > max_attempts) fail(ErrorCode::NoConvergence, "rejection sampling acceptance rate too low");
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(bb.lo(i), bb.hi(i));
    if (contains(region, x)) out.push_back(x);
  }
  return out;
}

}  // namespace polarity
