#include <cmath>

#include "polarity/conditions.hpp"
#include "polarity/errors.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"

namespace polarity {

namespace {

struct Cube {
  Vec center;
  double half = 0.0;
  std::size_t scale_index = 0;
  std::size_t center_index = 0;
};

std::vector<double> half_sides_of(const ComparabilitySampling& s) {
  std::vector<double> h = s.half_sides;
  if (h.empty()) h = ConditionSampling::dyadic_scales(-4, 4);
  for (double v : h)
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::ConfigInvalid, "half sides must be positive");
  return h;
}

// Centres are in units of the half side, so every scale sees the same shapes.
std::vector<Vec> unit_centers(const ComparabilitySampling& s) {
  const int n = s.dim;
  std::vector<Vec> c;
  if (s.include_origin) c.push_back(Vec::Zero(n));
  for (const auto& v : s.centers) {
    if (v.size() != n) fail(ErrorCode::DimensionMismatch, "cube centre has the wrong dimension");
    c.push_back(v);
  }
  for (int i = 0; i < s.random_centers; ++i) {
    Rng rng = Rng::substream(s.seed, {0xC0, static_cast<std::uint64_t>(i)});
    Vec v(n);
    for (int j = 0; j < n; ++j) v(j) = rng.uniform(-1.0, 1.0);
    c.push_back(v);
  }
  return c;
}

std::vector<Cube> cube_family(const ComparabilitySampling& s) {
  if (s.dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const auto hs = half_sides_of(s);
  const auto cs = unit_centers(s);
  if (cs.empty()) fail(ErrorCode::EmptySampling, "no cubes to sample");
  std::vector<Cube> out;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) out.push_back({hs[i] * cs[j], hs[i], i, j});
  return out;
}

// A subset E of Q given as a list of boxes with disjoint interiors, together
// with an integration stream shared by both measures.
struct Piece {
  Vec center;
  double half;
};

struct SubsetMeasures {
  std::string label;
  double m1 = 0.0;
  double m2 = 0.0;
};

IntegrateOptions stream_opts(const IntegrateOptions& base, std::initializer_list<std::uint64_t> path) {
  IntegrateOptions o = base;
  Rng r = Rng::substream(base.seed, path);
  o.seed = r.next();
  return o;
}

std::vector<SubsetMeasures> subsets_of(const Weight& mu1, const Weight& mu2, const Cube& q,
                                       const ComparabilitySampling& s) {
  const int n = s.dim;
  std::vector<SubsetMeasures> out;
  auto measure = [&](const Vec& c, double h, std::initializer_list<std::uint64_t> path) {
    IntegrateOptions o = stream_opts(s.integrate, path);
    Body b = Body::cube(n, h, c);
    return std::make_pair(integrate(mu1, b, o).value, integrate(mu2, b, o).value);
  };
  const std::uint64_t ci = q.center_index;
  if (s.subsets != SubsetMode::Dyadic) {
    const int kmax = std::max(1, s.corner_fractions);
    for (int corner = 0; corner < (1 << n); ++corner) {
      for (int k = 1; k <= kmax; ++k) {
        const double t = static_cast<double>(k) / kmax;
        Vec c(n);
        for (int i = 0; i < n; ++i) {
          const double sgn = ((corner >> i) & 1) ? 1.0 : -1.0;
          c(i) = q.center(i) + sgn * q.half * (1.0 - t);
        }
        auto [a, b] = measure(c, q.half * t, {0xC1, ci, static_cast<std::uint64_t>(corner), static_cast<std::uint64_t>(k)});
        out.push_back({"corner " + std::to_string(corner) + " t=" + std::to_string(t), a, b});
      }
    }
  }
  if (s.subsets != SubsetMode::Corners) {
    for (int depth = 1; depth <= s.dyadic_depth; ++depth) {
      const double cells_d = std::pow(2.0, n * depth);
      if (cells_d > 4096) break;
      const auto cells = static_cast<std::size_t>(cells_d);
      const int per_axis = 1 << depth;
      const double h = q.half / per_axis;
      std::vector<std::pair<double, double>> cm(cells);
      for (std::size_t cell = 0; cell < cells; ++cell) {
        Vec c(n);
        std::size_t rem = cell;
        for (int i = 0; i < n; ++i) {
          const int idx = static_cast<int>(rem % per_axis);
          rem /= per_axis;
          c(i) = q.center(i) - q.half + h * (2 * idx + 1);
        }
        cm[cell] = measure(c, h, {0xDA, ci, static_cast<std::uint64_t>(depth), cell});
      }
      for (int u = 0; u < s.unions_per_depth; ++u) {
        Rng rng = Rng::substream(s.seed, {0xD1, ci, static_cast<std::uint64_t>(depth), static_cast<std::uint64_t>(u)});
        std::vector<char> pick(cells);
        std::size_t count = 0;
        for (auto& p : pick) {
          p = rng.uniform() < 0.5;
          count += p;
        }
        if (count == 0) pick[rng.index(cells)] = 1;
        SubsetMeasures m{"dyadic depth " + std::to_string(depth) + " union " + std::to_string(u), 0.0, 0.0};
        for (std::size_t cell = 0; cell < cells; ++cell)
          if (pick[cell]) {
            m.m1 += cm[cell].first;
            m.m2 += cm[cell].second;
          }
        out.push_back(m);
      }
    }
  }
  return out;
}

bool doubling_passes(const Weight& w, const ComparabilitySampling& s, double cap) {
  try {
    DoublingOptions d;
    d.dim = s.dim;
    d.half_sides = half_sides_of(s);
    d.centers = s.random_centers;
    d.center_range = d.half_sides.back();
    d.include_origin = true;
    d.integrate = s.integrate;
    return is_doubling(w, cap, d).passed;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

ComparabilityReport check_comparability(const Weight& mu1, const Weight& mu2, double delta,
                                        const ComparabilitySampling& s) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::ExponentOutOfRange, "delta must be positive");
  const auto cubes = cube_family(s);
  const auto hs = half_sides_of(s);
  ComparabilityReport rep;
  rep.delta = delta;
  if (delta > 1.0) rep.warnings.push_back("delta > 1: comparability of a measure with itself fails except trivially");
  const double cap = s.doubling_cap > 0.0 ? s.doubling_cap : std::pow(2.0, s.dim) * 64.0;
  rep.mu1_doubling = doubling_passes(mu1, s, cap);
  rep.mu2_doubling = doubling_passes(mu2, s, cap);
  if (!rep.mu1_doubling && !rep.mu2_doubling)
    rep.warnings.push_back("NotDoubling: neither measure passed the doubling check on the sampled cubes");

  struct CubeResult {
    double best = 0.0;
    std::string label;
    double r1 = 0.0, r2 = 0.0;
    std::size_t count = 0;
  };
  std::vector<CubeResult> results(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t k) {
    const Cube& q = cubes[k];
    IntegrateOptions o = stream_opts(s.integrate, {0xC2, q.center_index});
    Body qb = Body::cube(s.dim, q.half, q.center);
    const double m1q = integrate(mu1, qb, o).value;
    const double m2q = integrate(mu2, qb, o).value;
    if (!(m1q > 0.0) || !(m2q > 0.0))
      fail(ErrorCode::ZeroMeasureCube, "a sampled cube has zero measure (half side " + std::to_string(q.half) + ")");
    CubeResult r;
    for (const auto& sub : subsets_of(mu1, mu2, q, s)) {
      const double r1 = sub.m1 / m1q, r2 = sub.m2 / m2q;
      double c;
      if (r2 <= 0.0) {
        if (r1 <= 0.0) continue;
        c = INFINITY;
      } else {
        c = r1 / std::pow(r2, delta);
      }
      ++r.count;
      if (c > r.best || r.label.empty()) {
        r.best = c;
        r.label = sub.label;
        r.r1 = r1;
        r.r2 = r2;
      }
    }
    results[k] = r;
  });

  std::vector<double> per_scale(hs.size(), 0.0);
  bool first = true;
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    const auto& r = results[k];
    rep.subsets += r.count;
    per_scale[cubes[k].scale_index] = std::max(per_scale[cubes[k].scale_index], r.best);
    if (first || r.best > rep.c_estimate) {
      first = false;
      rep.c_estimate = r.best;
      rep.witness_center = cubes[k].center;
      rep.witness_half_side = cubes[k].half;
      rep.witness_subset = r.label;
      rep.witness_mu1_ratio = r.r1;
      rep.witness_mu2_ratio = r.r2;
    }
  }
  for (std::size_t i = 0; i < hs.size(); ++i) rep.per_scale.emplace_back(hs[i], per_scale[i]);
  if (hs.size() >= 4 && std::isfinite(rep.c_estimate) && rep.c_estimate > 0.0)
    rep.assessment = assess_trend(rep.per_scale, s.thresholds);
  return rep;
}

double epsilon_of_delta(double delta, double c, int n) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::ExponentOutOfRange, "delta must be positive");
  if (!(c > 0.5) || !std::isfinite(c))
    fail(ErrorCode::ExponentOutOfRange, "the comparability constant must exceed 1/2");
  if (n < 1) fail(ErrorCode::ExponentOutOfRange, "dimension must be >= 1");
  const double l2 = std::log(2.0);
  return 0.5 * l2 / (n * l2 + std::log(2.0 * c) / delta);
}

ReverseHolderReport reverse_holder_check(const Weight& mu1, const Weight& sigma, double epsilon,
                                         const ComparabilitySampling& s) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorCode::ExponentOutOfRange, "epsilon must be positive");
  const auto cubes = cube_family(s);
  const auto hs = half_sides_of(s);
  const Weight high = Weight::product({Weight::pow(sigma, 1.0 + epsilon), mu1});
  const Weight low = Weight::product({sigma, mu1});
  ReverseHolderReport rep;
  std::vector<double> ratios(cubes.size(), 0.0);
  std::vector<std::string> failures(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t k) {
    const Cube& q = cubes[k];
    IntegrateOptions o = stream_opts(s.integrate, {0x7E, q.scale_index, q.center_index});
    Body qb = Body::cube(s.dim, q.half, q.center);
    try {
      const double m = integrate(mu1, qb, o).value;
      if (!(m > 0.0)) fail(ErrorCode::ZeroMeasureCube, "mu1(Q) = 0 on a sampled cube");
      const double a1 = integrate(high, qb, o).value / m;
      const double a0 = integrate(low, qb, o).value / m;
      if (!(a0 > 0.0)) fail(ErrorCode::ZeroMeasureCube, "sigma vanishes on a sampled cube");
      ratios[k] = std::pow(a1, 1.0 / (1.0 + epsilon)) / a0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonIntegrableSingularity) throw;
      ratios[k] = INFINITY;
      failures[k] = e.what();
    }
  });
  std::vector<double> per_scale(hs.size(), 0.0);
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    per_scale[cubes[k].scale_index] = std::max(per_scale[cubes[k].scale_index], ratios[k]);
    if (!failures[k].empty() && !rep.diverged) {
      rep.diverged = true;
      rep.divergence = failures[k];
    }
    if (k == 0 || ratios[k] > rep.c_estimate) {
      rep.c_estimate = ratios[k];
      rep.witness_center = cubes[k].center;
      rep.witness_half_side = cubes[k].half;
    }
  }
  for (std::size_t i = 0; i < hs.size(); ++i) rep.per_scale.emplace_back(hs[i], per_scale[i]);
  return rep;
}

}  // namespace polarity
