#include <cmath>
#include <map>
#include <mutex>

#include "polarity/errors.hpp"
#include "polarity/fourier.hpp"

namespace polarity {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int m) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  if (m < 1 || m > 4096) fail(ErrorCode::InvalidArgument, "quadrature order out of range");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> x(m), w(m);
  for (int i = 0; i < m; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (t * p1 - p0) / (t * t - 1.0);
    }
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // half of 2/((1-t^2) P'^2)
  }
  return cache.emplace(m, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace detail {

// int over the simplex of e^{-i x.z} at order m per collapsed coordinate.
// Duffy map: x = v0 + s1 (v1 - v0) + s1 s2 (v2 - v1) + ..., Jacobian
// n! |simplex| s1^{n-1} s2^{n-2} ...
void simplex_transform(const Mat& simplex, const std::vector<Vec>& zs, int m, std::vector<Complex>& out) {
  const int n = static_cast<int>(simplex.cols());
  Mat edges(n, n);
  for (int k = 0; k < n; ++k) edges.col(k) = (simplex.row(k + 1) - simplex.row(k)).transpose();
  Mat span(n, n);
  for (int k = 0; k < n; ++k) span.col(k) = (simplex.row(k + 1) - simplex.row(0)).transpose();
  const double jac0 = std::abs(span.determinant());  // = n! |simplex|
  const auto& [gx, gw] = gauss_legendre(m);
  std::vector<Vec> pts;
  std::vector<double> wts;
  std::vector<int> idx(n, 0);
  const Vec v0 = simplex.row(0).transpose();
  const std::size_t total = static_cast<std::size_t>(std::pow(m, n));
  pts.reserve(total);
  wts.reserve(total);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    for (int k = 0; k < n; ++k) {
      idx[k] = static_cast<int>(rem % m);
      rem /= m;
    }
    Vec x = v0;
    double prod = 1.0, weight = jac0;
    for (int k = 0; k < n; ++k) {
      const double s = gx[idx[k]];
      prod *= s;
      x += prod * edges.col(k);
      weight *= gw[idx[k]] * std::pow(s, n - 1 - k);
    }
    pts.push_back(x);
    wts.push_back(weight);
  }
  for (std::size_t j = 0; j < zs.size(); ++j) {
    Complex sum = 0.0;
    for (std::size_t t = 0; t < pts.size(); ++t) {
      const double phase = pts[t].dot(zs[j]);
      sum += wts[t] * Complex(std::cos(phase), -std::sin(phase));
    }
    out[j] += sum;
  }
}

}  // namespace detail

}  // namespace polarity
