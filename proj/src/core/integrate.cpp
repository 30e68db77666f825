#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"
#include "polarity/weights.hpp"

namespace polarity {

namespace {

constexpr std::uint64_t kBlockSize = 65536;
constexpr int kShells = 24;
constexpr std::uint64_t kMinShellSamples = 32;

using Kind = Weight::Kind;

// Antiderivative of |t|^alpha scaled by (alpha+1): sign(t)|t|^{alpha+1}.
double signed_pow(double t, double beta) { return t < 0 ? -std::pow(-t, beta) : std::pow(t, beta); }

}  // namespace

double power_integral_1d(double alpha, double a, double b) {
  if (a > b) std::swap(a, b);
  if (a == b) return 0.0;
  if (alpha <= -1.0) {
    if (a <= 0.0 && b >= 0.0)
      fail(ErrorCode::NonIntegrableSingularity, "|t|^alpha with alpha <= -1 is not integrable near 0");
    if (alpha == -1.0) return std::abs(std::log(std::abs(b)) - std::log(std::abs(a)));
  }
  const double beta = alpha + 1.0;
  return (signed_pow(b, beta) - signed_pow(a, beta)) / beta;
}

namespace {

// Inverse CDF for the density |t|^alpha on [a, b], alpha > -1.
double sample_power_1d(double alpha, double a, double b, double u) {
  const double beta = alpha + 1.0;
  const double ga = signed_pow(a, beta);
  const double gb = signed_pow(b, beta);
  const double g = ga + u * (gb - ga);
  const double t = signed_pow(g, 1.0 / beta);
  return std::clamp(t, a, b);
}

// Integral of the 1D hat function of node j (spacing h, nodes lo + k h,
// count m) over [a, b], truncated to the grid domain.
double hat_integral(double lo, double h, int m, int j, double a, double b) {
  const double xj = lo + j * h;
  double total = 0.0;
  auto piece = [&](double l, double r, double vl, double vr) {
    const double s = std::max(a, l), e = std::min(b, r);
    if (e <= s) return;
    auto val = [&](double x) { return vl + (vr - vl) * (x - l) / (r - l); };
    total += (e - s) * 0.5 * (val(s) + val(e));
  };
  if (j > 0) piece(xj - h, xj, 0.0, 1.0);
  if (j < m - 1) piece(xj, xj + h, 1.0, 0.0);
  return total;
}

double grid_box_integral(const Weight::GridData& g, const Vec& a, const Vec& b) {
  const int d = static_cast<int>(g.shape.size());
  std::vector<std::vector<double>> axis(d);
  for (int i = 0; i < d; ++i) {
    const double h = (g.hi(i) - g.lo(i)) / (g.shape[i] - 1);
    axis[i].resize(g.shape[i]);
    for (int j = 0; j < g.shape[i]; ++j) axis[i][j] = hat_integral(g.lo(i), h, g.shape[i], j, a(i), b(i));
  }
  double total = 0.0;
  std::vector<int> idx(d, 0);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    std::size_t rem = k;
    double wgt = g.values[k];
    for (int i = d - 1; i >= 0 && wgt != 0.0; --i) {
      wgt *= axis[i][rem % g.shape[i]];
      rem /= g.shape[i];
    }
    total += wgt;
  }
  return total;
}

bool is_centred_ball(const TranslatedBody& region, double* radius) {
  TranslatedBody r = normalize(region);
  const auto* e = r.base.get_if<Ellipsoid>();
  if (!e || r.has_shift() || e->center.norm() > 1e-14) return false;
  const int n = r.dim();
  const double s = e->shape(0, 0);
  if ((e->shape - s * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-14 * s) return false;
  *radius = 1.0 / std::sqrt(s);
  return true;
}

void check_singularity_at_origin(double alpha, const TranslatedBody& region) {
  if (alpha <= -region.dim() && contains(region, Vec::Zero(region.dim())))
    fail(ErrorCode::NonIntegrableSingularity, "|x|^alpha with alpha <= -n over a region containing 0");
}

std::optional<double> exact_integral(const Weight& u, const TranslatedBody& region) {
  const int n = region.dim();
  switch (u.kind()) {
    case Kind::Constant: {
      if (u.constant_value() == 0.0) return 0.0;
      if (auto v = exact_volume(region.base)) return u.constant_value() * *v;
      return std::nullopt;
    }
    case Kind::Scaled: {
      if (auto v = exact_integral(u.inner(), region)) return u.scale() * *v;
      return std::nullopt;
    }
    case Kind::Translated: return exact_integral(u.inner(), translate(region, u.shift()));
    case Kind::Power: {
      if (n == 1) {
        auto [a, b] = interval_of(region);
        return power_integral_1d(u.alpha(), a, b);
      }
      double r = 0.0;
      if (is_centred_ball(region, &r)) {
        if (u.alpha() <= -n) fail(ErrorCode::NonIntegrableSingularity, "|x|^alpha with alpha <= -n over a ball");
        const double sphere = n * unit_ball_volume(n);
        return sphere * std::pow(r, n + u.alpha()) / (n + u.alpha());
      }
      check_singularity_at_origin(u.alpha(), region);
      return std::nullopt;
    }
    case Kind::Aniso: {
      if (!is_axis_aligned_box(region)) return std::nullopt;
      Bounds bb = bounding_box(region);
      double v = 1.0;
      for (int i = 0; i < n; ++i) v *= power_integral_1d(u.alphas()(i), bb.lo(i), bb.hi(i));
      return v;
    }
    case Kind::Grid: {
      if (!is_axis_aligned_box(region)) return std::nullopt;
      Bounds bb = bounding_box(region);
      return grid_box_integral(u.grid_data(), bb.lo, bb.hi);
    }
    case Kind::Product:
    case Kind::Pow: return std::nullopt;
  }
  return std::nullopt;
}

struct Singularity {
  Vec point;
  double alpha = 0.0;
};

// Isolated point singularity |x - point|^alpha, alpha < 0.
std::optional<Singularity> point_singularity(const Weight& u, int n) {
  switch (u.kind()) {
    case Kind::Power:
      if (u.alpha() < 0.0) return Singularity{Vec::Zero(n), u.alpha()};
      return std::nullopt;
    case Kind::Scaled: return point_singularity(u.inner(), n);
    case Kind::Translated: {
      auto s = point_singularity(u.inner(), n);
      if (s) s->point -= u.shift();
      return s;
    }
    case Kind::Product: {
      std::optional<Singularity> best;
      for (const auto& f : u.factors()) {
        auto s = point_singularity(f, n);
        if (s && (!best || s->alpha < best->alpha)) best = s;
      }
      return best;
    }
    default: return std::nullopt;
  }
}

struct AxisSingularity {
  Vec center;
  Vec alphas;  // only negative entries are importance sampled
};

std::optional<AxisSingularity> axis_singularity(const Weight& u, int n) {
  switch (u.kind()) {
    case Kind::Aniso:
      if ((u.alphas().array() < 0.0).any()) return AxisSingularity{Vec::Zero(n), u.alphas()};
      return std::nullopt;
    case Kind::Scaled: return axis_singularity(u.inner(), n);
    case Kind::Translated: {
      auto s = axis_singularity(u.inner(), n);
      if (s) s->center -= u.shift();
      return s;
    }
    case Kind::Product:
      for (const auto& f : u.factors())
        if (auto s = axis_singularity(f, n)) return s;
      return std::nullopt;
    default: return std::nullopt;
  }
}

// Running sums for y = g(x) 1_E(x) within one stratum.
struct Stats {
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  double gsum = 0.0;

  void add(double g, bool inside) {
    ++n;
    gsum += g;
    if (inside) {
      ++hits;
      sum += g;
      sumsq += g * g;
    }
  }
  void merge(const Stats& o) {
    n += o.n;
    hits += o.hits;
    sum += o.sum;
    sumsq += o.sumsq;
    gsum += o.gsum;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  // Variance of the mean. The sample variance is floored by a binomial term
  // with a (hits + 0.5)/(n + 1) proportion so that all-miss or all-hit strata
  // still carry an error.
  double mean_variance() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = sum / nn;
    const double s2 = std::max(0.0, (sumsq - nn * m * m) / (nn - 1.0));
    const double p = (static_cast<double>(hits) + 0.5) / (nn + 1.0);
    const double gbar = hits ? sum / static_cast<double>(hits) : gsum / nn;
    return std::max(s2, gbar * gbar * p * (1.0 - p)) / nn;
  }
};

double checked_value(const Weight& u, const Vec& x) {
  const double v = u(x);
  if (!std::isfinite(v)) fail(ErrorCode::NonIntegrableSingularity, "weight is infinite at a sampled point");
  return v;
}

MeasureEstimate finish(double value, double variance, const IntegrateOptions& opts) {
  MeasureEstimate e;
  e.value = value;
  e.abs_error = 3.0 * std::sqrt(variance);
  e.method = Method::MonteCarlo;
  e.samples = opts.samples;
  e.seed = opts.seed;
  return e;
}

template <class Sampler>
Stats run_blocks(const TranslatedBody& region, const Weight& u, std::uint64_t samples, std::uint64_t seed,
                 std::uint64_t stratum, Sampler&& sample) {
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<Stats> parts(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = Rng::substream(seed, {stratum, static_cast<std::uint64_t>(b)});
    const std::uint64_t count = std::min<std::uint64_t>(kBlockSize, samples - b * kBlockSize);
    Vec x(region.dim());
    Stats st;
    for (std::uint64_t s = 0; s < count; ++s) {
      const double density = sample(rng, x);
      const bool inside = contains(region, x);
      st.add(inside ? checked_value(u, x) / density : 0.0, inside);
    }
    parts[b] = st;
  });
  Stats total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

MeasureEstimate uniform_mc(const Weight& u, const TranslatedBody& region, const IntegrateOptions& opts) {
  const Bounds bb = bounding_box(region);
  const double vol = bb.volume();
  const int n = region.dim();
  Stats st = run_blocks(region, u, opts.samples, opts.seed, 0, [&](Rng& rng, Vec& x) {
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(bb.lo(i), bb.hi(i));
    return 1.0;
  });
  return finish(vol * st.mean(), vol * vol * st.mean_variance(), opts);
}

// Independent per-axis densities |x_i - c_i|^{alpha_i} on the bounding box
// for the negative exponents, uniform elsewhere.
MeasureEstimate axis_mc(const Weight& u, const TranslatedBody& region, const AxisSingularity& s,
                        const IntegrateOptions& opts) {
  const Bounds bb = bounding_box(region);
  const int n = region.dim();
  Vec mass(n);
  for (int i = 0; i < n; ++i) {
    const double a = bb.lo(i) - s.center(i), b = bb.hi(i) - s.center(i);
    mass(i) = s.alphas(i) < 0.0 ? power_integral_1d(s.alphas(i), a, b) : b - a;
  }
  const double total_mass = mass.prod();
  Stats st = run_blocks(region, u, opts.samples, opts.seed, 1, [&](Rng& rng, Vec& x) {
    double density = 1.0;
    for (int i = 0; i < n; ++i) {
      if (s.alphas(i) < 0.0) {
        const double a = bb.lo(i) - s.center(i), b = bb.hi(i) - s.center(i);
        double t = sample_power_1d(s.alphas(i), a, b, rng.uniform());
        if (t == 0.0) t = (b > 0 ? 1e-300 : -1e-300);
        x(i) = s.center(i) + t;
        density *= std::pow(std::abs(t), s.alphas(i)) / mass(i);
      } else {
        x(i) = rng.uniform(bb.lo(i), bb.hi(i));
        density /= mass(i);
      }
    }
    return density * total_mass;
  });
  return finish(total_mass * st.mean(), total_mass * total_mass * st.mean_variance(), opts);
}

// Radial shells around a point singularity. Radii follow the density
// r^{n-1+alpha} within each shell, directions are uniform; shell masses are
// analytic so each shell only estimates the average of u/|x-x0|^alpha on E.
MeasureEstimate radial_mc(const Weight& u, const TranslatedBody& region, const Singularity& s,
                          const IntegrateOptions& opts) {
  const int n = region.dim();
  const double beta = n + s.alpha;
  const Bounds bb = bounding_box(region);
  Vec nearest = s.point.cwiseMax(bb.lo).cwiseMin(bb.hi);
  const double r_min = (nearest - s.point).norm();
  double r_max = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = ((corner >> i) & 1) ? bb.hi(i) : bb.lo(i);
    r_max = std::max(r_max, (c - s.point).norm());
  }
  const double sphere = n * unit_ball_volume(n);
  std::vector<double> edges(kShells + 1);
  for (int k = 0; k <= kShells; ++k) edges[k] = r_min + (r_max - r_min) * std::ldexp(1.0, -k);
  edges[kShells] = r_min;
  std::vector<double> masses(kShells);
  double total_mass = 0.0;
  for (int k = 0; k < kShells; ++k) {
    masses[k] = sphere * (std::pow(edges[k], beta) - std::pow(edges[k + 1], beta)) / beta;
    total_mass += masses[k];
  }
  const std::uint64_t budget = std::max<std::uint64_t>(opts.samples, kShells * kMinShellSamples);
  double value = 0.0, variance = 0.0;
  std::vector<Stats> shell_stats(kShells);
  for (int k = 0; k < kShells; ++k) {
    if (masses[k] <= 0.0) continue;
    const auto share = static_cast<std::uint64_t>(std::llround(static_cast<double>(budget) * masses[k] / total_mass));
    const std::uint64_t count = std::max(kMinShellSamples, share);
    const double ra = std::pow(edges[k + 1], beta), rb = std::pow(edges[k], beta);
    shell_stats[k] = run_blocks(region, u, count, opts.seed, 100 + static_cast<std::uint64_t>(k), [&](Rng& rng, Vec& x) {
      const double r = std::pow(ra + rng.uniform() * (rb - ra), 1.0 / beta);
      Vec dir(n);
      double norm = 0.0;
      while (norm < 1e-12) {
        for (int i = 0; i < n; ++i) dir(i) = rng.normal();
        norm = dir.norm();
      }
      x = s.point + (r / norm) * dir;
      // Density relative to the shell mass: |x - x0|^alpha / mass.
      return std::pow(std::max(r, 1e-300), s.alpha);
    });
    value += masses[k] * shell_stats[k].mean();
    variance += masses[k] * masses[k] * shell_stats[k].mean_variance();
  }
  return finish(value, variance, opts);
}

}  // namespace

MeasureEstimate integrate(const Weight& u, const TranslatedBody& region, const IntegrateOptions& opts) {
  const int n = region.dim();
  if (u.dim() != 0 && u.dim() != n)
    fail(ErrorCode::DimensionMismatch, "weight dimension " + std::to_string(u.dim()) + " does not match region dimension " +
                                           std::to_string(n));
  if (opts.method != VolumeMethod::MonteCarlo) {
    if (auto v = exact_integral(u, region)) return MeasureEstimate::exact(*v);
    if (opts.method == VolumeMethod::Exact) fail(ErrorCode::InvalidArgument, "no exact integral for " + u.describe());
  }
  if (n > kMaxMonteCarloDim) fail(ErrorCode::InvalidArgument, "Monte Carlo integration supports dimension <= 6");
  if (opts.samples < kMinMonteCarloSamples) fail(ErrorCode::SampleBudgetTooSmall, "Monte Carlo needs at least 1000 samples");
  if (u.is_zero()) return MeasureEstimate::exact(0.0);

  if (auto s = point_singularity(u, n)) {
    if (s->alpha <= -n && contains(region, s->point))
      fail(ErrorCode::NonIntegrableSingularity, "point singularity of order <= -n inside the region");
    if (s->alpha > -n) {
      const Bounds bb = bounding_box(region);
      const double diam = (bb.hi - bb.lo).norm();
      Vec nearest = s->point.cwiseMax(bb.lo).cwiseMin(bb.hi);
      if ((nearest - s->point).norm() < diam) return radial_mc(u, region, *s, opts);
    }
  }
  if (auto s = axis_singularity(u, n)) return axis_mc(u, region, *s, opts);
  return uniform_mc(u, region, opts);
}

DoublingReport is_doubling(const Weight& u, double c_cap, const DoublingOptions& opts) {
  const int n = opts.dim;
  if (n < 1) fail(ErrorCode::InvalidArgument, "doubling check needs dim >= 1");
  if (opts.half_sides.empty()) fail(ErrorCode::EmptySampling, "no cube sizes given");
  std::vector<Vec> centers;
  if (opts.include_origin) centers.push_back(Vec::Zero(n));
  Rng rng = Rng::substream(opts.integrate.seed, {0xD0});
  for (int i = 0; i < opts.centers; ++i) {
    Vec c(n);
    for (int j = 0; j < n; ++j) c(j) = rng.uniform(-opts.center_range, opts.center_range);
    centers.push_back(c);
  }
  if (centers.empty()) fail(ErrorCode::EmptySampling, "no cube centres given");
  const std::size_t total = centers.size() * opts.half_sides.size();
  std::vector<double> ratios(total);
  parallel_for(total, [&](std::size_t k) {
    const Vec& c = centers[k % centers.size()];
    const double h = opts.half_sides[k / centers.size()];
    IntegrateOptions o = opts.integrate;
    o.seed = Rng::substream(opts.integrate.seed, {k, 1}).next();
    const double small = integrate(u, Body::cube(n, h, c), o).value;
    o.seed = Rng::substream(opts.integrate.seed, {k, 2}).next();
    const double big = integrate(u, Body::cube(n, 2.0 * h, c), o).value;
    if (!(small > 0.0)) {
      std::string where;
      for (int j = 0; j < n; ++j) where += (j ? "," : "") + std::to_string(c(j));
      fail(ErrorCode::ZeroMeasureCube, "u(Q) = 0 for the cube centred at (" + where + ") with half side " +
                                           std::to_string(h));
    }
    ratios[k] = big / small;
  });
  DoublingReport r;
  r.cubes = total;
  for (std::size_t k = 0; k < total; ++k) {
    if (ratios[k] > r.max_ratio) {
      r.max_ratio = ratios[k];
      r.witness_center = centers[k % centers.size()];
      r.witness_half_side = opts.half_sides[k / centers.size()];
    }
  }
  r.passed = r.max_ratio <= c_cap;
  return r;
}

}  // namespace polarity
