#include "polytope_internal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polarity/errors.hpp"

namespace polarity::detail {

namespace {

double binomial(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

bool same_vector(const Vec& a, const Vec& b, double tol) {
  return (a - b).norm() <= tol * std::max(1.0, std::max(a.norm(), b.norm()));
}

void push_unique(std::vector<Vec>& list, const Vec& v, double tol) {
  for (const auto& e : list)
    if (same_vector(e, v, tol)) return;
  list.push_back(v);
}

Mat rows_to_mat(const std::vector<Vec>& rows, int dim) {
  Mat m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

}  // namespace

void for_each_combination(int m, int k, const std::function<void(const std::vector<int>&)>& fn,
                          double cap) {
  if (k > m || k < 0) return;
  if (binomial(m, k) > cap)
    fail(ErrorCode::InvalidArgument, "combinatorial enumeration too large (" + std::to_string(m) +
                                         " choose " + std::to_string(k) + ")");
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k == 0) {
    fn(idx);
    return;
  }
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

PolytopeData symmetric_hull(const Mat& generators) {
  const int n = static_cast<int>(generators.cols());
  std::vector<Vec> pts;
  for (Eigen::Index i = 0; i < generators.rows(); ++i) {
    Vec g = generators.row(i).transpose();
    if (g.norm() == 0.0) continue;
    push_unique(pts, g, 1e-12);
    push_unique(pts, -g, 1e-12);
  }
  const int m = static_cast<int>(pts.size());
  std::vector<Vec> facets;
  for_each_combination(m, n, [&](const std::vector<int>& s) {
    Mat a(n, n);
    for (int r = 0; r < n; ++r) a.row(r) = pts[static_cast<std::size_t>(s[static_cast<std::size_t>(r)])].transpose();
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) return;
    Vec c = lu.solve(Vec::Ones(n));
    if (!c.allFinite()) return;
    for (const auto& p : pts)
      if (std::abs(p.dot(c)) > 1.0 + 1e-10) return;
    push_unique(facets, c, 1e-9);
  });

  std::vector<Vec> verts;
  for (const auto& p : pts) {
    std::vector<Vec> tight;
    for (const auto& c : facets)
      if (std::abs(p.dot(c) - 1.0) <= 1e-9) tight.push_back(c);
    if (static_cast<int>(tight.size()) < n) continue;
    Eigen::FullPivLU<Mat> lu(rows_to_mat(tight, n));
    lu.setThreshold(1e-10);
    if (lu.rank() == n) push_unique(verts, p, 1e-12);
  }
  PolytopeData d;
  d.vertices = rows_to_mat(verts, n);
  d.facet_normals = rows_to_mat(facets, n);
  d.facet_offsets = Vec::Ones(static_cast<Eigen::Index>(facets.size()));
  return d;
}

bool h_is_bounded(const Mat& normals) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  Eigen::FullPivLU<Mat> full(normals);
  full.setThreshold(1e-12);
  if (m == 0 || full.rank() < n) return false;
  Mat unit = normals;
  for (int i = 0; i < m; ++i) unit.row(i) /= normals.row(i).norm();
  auto recedes = [&](const Vec& d) { return (unit * d).maxCoeff() <= 1e-12; };
  if (n == 1) {
    Vec d(1);
    d(0) = 1.0;
    return !(recedes(d) || recedes(-d));
  }
  bool bounded = true;
  for_each_combination(m, n - 1, [&](const std::vector<int>& s) {
    if (!bounded) return;
    Mat a(n - 1, n);
    for (int r = 0; r < n - 1; ++r) a.row(r) = unit.row(s[static_cast<std::size_t>(r)]);
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < n - 1) return;
    Mat ker = lu.kernel();
    if (ker.cols() != 1) return;
    Vec d = ker.col(0).normalized();
    if (recedes(d) || recedes(-d)) bounded = false;
  });
  return bounded;
}

PolytopeData h_vertices(const Mat& normals, const Vec& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  std::vector<Vec> planes;  // deduplicated normalized (a / b)
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    Vec key = normals.row(i).transpose() / offsets(i);
    bool dup = false;
    for (const auto& p : planes)
      if (same_vector(p, key, 1e-12)) dup = true;
    if (!dup) {
      planes.push_back(key);
      keep.push_back(i);
    }
  }
  const int mk = static_cast<int>(keep.size());
  Mat a(mk, n);
  Vec b(mk);
  for (int i = 0; i < mk; ++i) {
    a.row(i) = normals.row(keep[static_cast<std::size_t>(i)]);
    b(i) = offsets(keep[static_cast<std::size_t>(i)]);
  }
  std::vector<Vec> verts;
  for_each_combination(mk, n, [&](const std::vector<int>& s) {
    Mat sub(n, n);
    Vec rhs(n);
    for (int r = 0; r < n; ++r) {
      sub.row(r) = a.row(s[static_cast<std::size_t>(r)]);
      rhs(r) = b(s[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) return;
    Vec x = lu.solve(rhs);
    if (!x.allFinite()) return;
    for (int i = 0; i < mk; ++i)
      if (a.row(i).dot(x) > b(i) + 1e-10 * (1.0 + std::abs(b(i)))) return;
    push_unique(verts, x, 1e-10);
  });
  PolytopeData d;
  d.vertices = rows_to_mat(verts, n);
  d.facet_normals = a;
  d.facet_offsets = b;
  return d;
}

std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Eigen::Vector2d>& hull) {
  double s = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * std::abs(s);
}

namespace {

// Vertices lying on facet j, ordered around the facet centroid.
std::vector<Eigen::Vector3d> ordered_facet(const PolytopeData& data, Eigen::Index j) {
  Eigen::Vector3d c = data.facet_normals.row(j).transpose();
  double off = data.facet_offsets(j);
  std::vector<Eigen::Vector3d> on;
  for (Eigen::Index i = 0; i < data.vertices.rows(); ++i) {
    Eigen::Vector3d v = data.vertices.row(i).transpose();
    if (std::abs(c.dot(v) - off) <= 1e-9 * (1.0 + std::abs(off)) * std::max(1.0, c.norm())) on.push_back(v);
  }
  if (on.size() < 3) return {};
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& v : on) centroid += v;
  centroid /= static_cast<double>(on.size());
  Eigen::Vector3d nrm = c.normalized();
  Eigen::Vector3d e1 = (on[0] - centroid);
  if (e1.norm() == 0.0) e1 = (on[1] - centroid);
  e1.normalize();
  Eigen::Vector3d e2 = nrm.cross(e1);
  std::sort(on.begin(), on.end(), [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    double ta = std::atan2((a - centroid).dot(e2), (a - centroid).dot(e1));
    double tb = std::atan2((b - centroid).dot(e2), (b - centroid).dot(e1));
    return ta < tb;
  });
  return on;
}

}  // namespace

double polytope_volume_3d(const PolytopeData& data) {
  Eigen::Vector3d apex = data.vertices.colwise().mean().transpose();
  double vol = 0.0;
  for (Eigen::Index j = 0; j < data.facet_normals.rows(); ++j) {
    auto poly = ordered_facet(data, j);
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
      Eigen::Matrix3d m;
      m.col(0) = poly[0] - apex;
      m.col(1) = poly[t] - apex;
      m.col(2) = poly[t + 1] - apex;
      vol += std::abs(m.determinant()) / 6.0;
    }
  }
  return vol;
}

std::vector<Mat> simplex_decomposition(const PolytopeData& data, int dim) {
  std::vector<Mat> out;
  if (dim == 1) {
    Mat s(2, 1);
    s(0, 0) = data.vertices.col(0).minCoeff();
    s(1, 0) = data.vertices.col(0).maxCoeff();
    out.push_back(s);
    return out;
  }
  if (dim == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (Eigen::Index i = 0; i < data.vertices.rows(); ++i) pts.emplace_back(data.vertices(i, 0), data.vertices(i, 1));
    auto hull = convex_hull_2d(pts);
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : hull) c += p;
    c /= static_cast<double>(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
      Mat s(3, 2);
      s.row(0) = c.transpose();
      s.row(1) = hull[i].transpose();
      s.row(2) = hull[(i + 1) % hull.size()].transpose();
      out.push_back(s);
    }
    return out;
  }
  if (dim == 3) {
    Eigen::Vector3d apex = data.vertices.colwise().mean().transpose();
    for (Eigen::Index j = 0; j < data.facet_normals.rows(); ++j) {
      auto poly = ordered_facet(data, j);
      for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        Mat s(4, 3);
        s.row(0) = apex.transpose();
        s.row(1) = poly[0].transpose();
        s.row(2) = poly[t].transpose();
        s.row(3) = poly[t + 1].transpose();
        out.push_back(s);
      }
    }
    return out;
  }
  fail(ErrorCode::InvalidArgument, "simplex decomposition supports dimensions 1..3");
}

Mat region_vertices(const TranslatedBody& region) {
  const int n = region.dim();
  Mat v;
  if (const auto* b = region.base.get_if<Box>()) {
    const int corners = 1 << n;
    v.resize(corners, n);
    for (int c = 0; c < corners; ++c) {
      Vec s(n);
      for (int i = 0; i < n; ++i) s(i) = ((c >> i) & 1) ? 1.0 : -1.0;
      v.row(c) = (b->center + b->rotation * s.cwiseProduct(b->half_extents)).transpose();
    }
  } else if (region.base.get_if<Ellipsoid>()) {
    fail(ErrorCode::InvalidArgument, "ellipsoids have no vertex description");
  } else {
    v = region.base.polytope().vertices;
  }
  for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) += region.shift.transpose();
  return v;
}

}  // namespace polarity::detail
