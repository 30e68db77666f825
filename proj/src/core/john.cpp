#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/geometry.hpp"
#include "polarity/random.hpp"
#include "polytope_internal.hpp"

namespace polarity {

namespace {

// Rows are the points; for symmetric bodies one of each +-pair suffices.
Mat half_point_set(const Body& body) {
  if (const auto* v = body.get_if<SymPolytopeV>()) return v->generators;
  if (!body.is_origin_symmetric() || body.get_if<Ellipsoid>())
    fail(ErrorCode::InvalidArgument, "John ellipsoid needs a symmetric polytope or a centred box");
  return detail::region_vertices(body);
}

}  // namespace

JohnResult loewner_john(const Body& body, double tolerance, int max_iterations, std::uint64_t seed) {
  if (!(tolerance > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  const int n = body.dim();
  const Mat g = half_point_set(body);
  const Eigen::Index m = g.rows();
  {
    Eigen::FullPivLU<Mat> lu(g);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) fail(ErrorCode::DegenerateGenerators, "generators do not span R^n");
  }

  const double target = n * (1.0 + tolerance) * (1.0 + tolerance);
  Vec u = Vec::Constant(m, 1.0 / static_cast<double>(m));
  Mat x_inv;
  Vec lev(m);
  int iter = 0;
  for (;; ++iter) {
    Mat x = g.transpose() * u.asDiagonal() * g;
    x_inv = x.llt().solve(Mat::Identity(n, n));
    for (Eigen::Index i = 0; i < m; ++i) lev(i) = g.row(i) * x_inv * g.row(i).transpose();
    Eigen::Index j;
    const double mj = lev.maxCoeff(&j);
    if (mj <= target) break;
    if (iter >= max_iterations) fail(ErrorCode::NoConvergence, "John ellipsoid iteration cap reached");
    const double step = (mj - n) / (n * (mj - 1.0));
    u *= (1.0 - step);
    u(j) += step;
  }
  const double m_max = lev.maxCoeff();

  JohnResult r{Body::ellipsoid(Vec::Zero(n), x_inv), Body::ellipsoid(Vec::Zero(n), x_inv / m_max),
               std::sqrt(m_max), iter, false};

  // Vertices inside factor * S, and boundary of S inside the body.
  bool ok = true;
  const auto* outer = r.outer.get_if<Ellipsoid>();
  for (Eigen::Index i = 0; i < m && ok; ++i) {
    Vec p = g.row(i).transpose();
    ok = p.dot(outer->shape * p) <= 1.0 + 1e-9;
  }
  Mat l = x_inv.inverse().llt().matrixL();
  Rng rng(seed);
  Vec y(n);
  for (int s = 0; s < 10000 && ok; ++s) {
    for (int i = 0; i < n; ++i) y(i) = rng.normal();
    y /= y.norm();
    ok = contains(body, Vec(l * y));
  }
  r.verified = ok;
  return r;
}

Body rect_ellipsoid_sandwich(const Body& body) {
  const auto* e = body.get_if<Ellipsoid>();
  if (!e || !body.is_origin_symmetric())
    fail(ErrorCode::InvalidArgument, "rectangle sandwich needs an ellipsoid centred at the origin");
  const int n = body.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(e->shape);
  Vec semi = es.eigenvalues().cwiseSqrt().cwiseInverse() / std::sqrt(static_cast<double>(n));
  Mat rot = es.eigenvectors();
  // Re-orthonormalise to stay within the rotation tolerance.
  Eigen::HouseholderQR<Mat> qr(rot);
  Mat q = qr.householderQ();
  for (int i = 0; i < n; ++i)
    if (q.col(i).dot(rot.col(i)) < 0) q.col(i) = -q.col(i);
  return Body::box(Vec::Zero(n), semi, q);
}

}  // namespace polarity
