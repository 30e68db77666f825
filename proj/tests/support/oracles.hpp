#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "polarity/geometry.hpp"
#include "polarity/random.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// |cube| |cube°| for the unit cube in R^n.
inline double cube_mahler(int n) { return std::pow(4.0, n) / factorial(n); }

// Area of the convex hull of a planar point set (monotone chain + shoelace).
inline double hull_area(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  double a = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& p = h[i];
    const auto& q = h[(i + 1) % h.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

// Composite midpoint rule.
inline double midpoint(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

// int_a^b e^{-i x z} dx
inline std::complex<double> interval_transform(double a, double b, double z) {
  if (z == 0.0) return b - a;
  const std::complex<double> i(0.0, 1.0);
  return (std::exp(-i * a * z) - std::exp(-i * b * z)) / (i * z);
}

inline double epsilon_c1_n1(double delta) { return 0.5 * delta / (delta + 1.0); }

inline Eigen::MatrixXd rotation2(double t) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

inline Eigen::MatrixXd random_rotation(int n, polarity::Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

// Random origin-symmetric body: rotated box, ellipsoid or V-polytope.
inline polarity::Body random_symmetric_body(int n, polarity::Rng& rng, int kind) {
  using polarity::Body;
  switch (kind % 3) {
    case 0: {
      Eigen::VectorXd h(n);
      for (int i = 0; i < n; ++i) h(i) = rng.uniform(0.3, 2.0);
      return Body::box(Eigen::VectorXd::Zero(n), h, random_rotation(n, rng));
    }
    case 1: {
      Eigen::MatrixXd r = random_rotation(n, rng);
      Eigen::VectorXd s(n);
      for (int i = 0; i < n; ++i) s(i) = rng.uniform(0.3, 2.0);
      Eigen::MatrixXd a = r * s.cwiseAbs2().cwiseInverse().asDiagonal() * r.transpose();
      return Body::ellipsoid(Eigen::VectorXd::Zero(n), 0.5 * (a + a.transpose()));
    }
    default: {
      const int k = n + static_cast<int>(rng.index(4));
      Eigen::MatrixXd g(k, n);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
      g.topRows(n) += 2.0 * Eigen::MatrixXd::Identity(n, n);  // keeps the generators spanning
      return Body::sym_polytope(g);
    }
  }
}

}  // namespace oracle
