#include "polarity/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polarity/errors.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"
#include "polytope_internal.hpp"

namespace polarity {

SimpleFunction SimpleFunction::indicator(const TranslatedBody& region, Complex coef) {
  return SimpleFunction{{SimpleTerm{coef, region}}};
}

int SimpleFunction::dim() const {
  if (terms.empty()) fail(ErrorCode::InvalidArgument, "simple function has no terms");
  const int n = terms.front().region.dim();
  for (const auto& t : terms)
    if (t.region.dim() != n) fail(ErrorCode::DimensionMismatch, "simple function regions differ in dimension");
  return n;
}

SimpleFunction SimpleFunction::scaled(Complex c) const {
  SimpleFunction f = *this;
  for (auto& t : f.terms) t.coef *= c;
  return f;
}

SimpleFunction SimpleFunction::dilated(double lambda) const {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "dilation factor must be positive");
  SimpleFunction f = *this;
  for (auto& t : f.terms) t.region = polarity::scaled(t.region, 1.0 / lambda);
  return f;
}

namespace {

double region_volume(const TranslatedBody& r) {
  VolumeOptions o;
  o.samples = 1000000;
  return volume(r, o).value;
}

}  // namespace

double SimpleFunction::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.coef) * region_volume(t.region);
  return s;
}

Estimate SimpleFunction::weighted_power_integral(double p, const Weight& v, const IntegrateOptions& opts) const {
  Estimate total = Estimate::exact(0.0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    IntegrateOptions o = opts;
    o.seed = Rng::substream(opts.seed, {i}).next();
    total = total + polarity::scaled(integrate(v, terms[i].region, o), std::pow(std::abs(terms[i].coef), p));
  }
  return total;
}

Bounds SimpleFunction::support() const {
  Bounds b = bounding_box(terms.at(0).region);
  for (const auto& t : terms) {
    Bounds o = bounding_box(t.region);
    b.lo = b.lo.cwiseMin(o.lo);
    b.hi = b.hi.cwiseMax(o.hi);
  }
  return b;
}

void check_disjoint(const SimpleFunction& f, std::size_t samples, std::uint64_t seed) {
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    const auto pts = sample_uniform(f.terms[i].region, samples, Rng::substream(seed, {i}).next());
    for (std::size_t j = 0; j < f.terms.size(); ++j) {
      if (i == j) continue;
      for (const auto& x : pts)
        if (contains(f.terms[j].region, x))
          fail(ErrorCode::InvalidArgument,
               "simple function regions " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }
}

namespace {

// 2 sin(a w) / w
double sinc_factor(double a, double w) {
  const double t = a * w;
  if (std::abs(t) < 1e-6) return 2.0 * a * (1.0 - t * t / 6.0);
  return 2.0 * std::sin(t) / w;
}

Complex phase(double x) { return Complex(std::cos(x), -std::sin(x)); }

// (2 pi)^{n/2} rho^{-n/2} J_{n/2}(rho), the transform of the unit ball.
double ball_transform(int n, double rho) {
  const double nu = 0.5 * n;
  if (rho < 2.0) {
    double sum = 0.0, term = 1.0 / std::tgamma(nu + 1.0);
    const double x = 0.25 * rho * rho;
    for (int k = 0; k < 40; ++k) {
      sum += term;
      term *= -x / ((k + 1.0) * (k + 1.0 + nu));
    }
    return std::pow(M_PI, nu) * sum;
  }
  return std::pow(2.0 * M_PI, nu) * std::pow(rho, -nu) * std::cyl_bessel_j(nu, rho);
}

std::vector<Complex> polytope_transform(const TranslatedBody& region, const std::vector<Vec>& zs,
                                        const QuadratureOptions& q) {
  const int n = region.dim();
  if (n > kMaxExactPolytopeDim)
    fail(ErrorCode::InvalidArgument, "polytope transforms are supported up to dimension 3");
  const auto simplices = detail::simplex_decomposition(region.base.polytope(), n);
  auto at_order = [&](int m) {
    std::vector<Complex> out(zs.size(), 0.0);
    for (const auto& s : simplices) detail::simplex_transform(s, zs, m, out);
    return out;
  };
  int m = std::max(1, q.initial_order);
  std::vector<Complex> prev = at_order(m);
  for (;;) {
    if (2 * m > q.max_order)
      fail(ErrorCode::QuadratureNotConverged, "polytope quadrature did not converge by order " + std::to_string(m));
    std::vector<Complex> next = at_order(2 * m);
    double diff = 0.0;
    for (std::size_t j = 0; j < zs.size(); ++j) diff = std::max(diff, std::abs(next[j] - prev[j]));
    m *= 2;
    prev = std::move(next);
    if (diff < q.tolerance) break;
  }
  if (region.has_shift())
    for (std::size_t j = 0; j < zs.size(); ++j) prev[j] *= phase(region.shift.dot(zs[j]));
  return prev;
}

}  // namespace

std::vector<Complex> region_transform(const TranslatedBody& input, const std::vector<Vec>& zs,
                                      const QuadratureOptions& q) {
  const TranslatedBody region = normalize(input);
  const int n = region.dim();
  for (const auto& z : zs)
    if (z.size() != n) fail(ErrorCode::DimensionMismatch, "frequency has the wrong dimension");
  std::vector<Complex> out(zs.size());
  if (n == 1) {
    auto [a, b] = interval_of(region);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t j = 0; j < zs.size(); ++j) out[j] = phase(mid * zs[j](0)) * sinc_factor(half, zs[j](0));
    return out;
  }
  if (const auto* b = region.base.get_if<Box>()) {
    for (std::size_t j = 0; j < zs.size(); ++j) {
      const Vec w = b->rotation.transpose() * zs[j];
      double mag = 1.0;
      for (int i = 0; i < n; ++i) mag *= sinc_factor(b->half_extents(i), w(i));
      out[j] = phase(b->center.dot(zs[j])) * mag;
    }
    return out;
  }
  if (const auto* e = region.base.get_if<Ellipsoid>()) {
    // x = c + A^{-1/2} y with |y| <= 1.
    Eigen::SelfAdjointEigenSolver<Mat> es(e->shape);
    const Mat inv_sqrt = es.operatorInverseSqrt();
    const double jac = 1.0 / std::sqrt(e->shape.determinant());
    for (std::size_t j = 0; j < zs.size(); ++j) {
      const double rho = (inv_sqrt * zs[j]).norm();
      out[j] = phase(e->center.dot(zs[j])) * (jac * ball_transform(n, rho));
    }
    return out;
  }
  return polytope_transform(region, zs, q);
}

std::vector<Complex> transform_at(const SimpleFunction& f, const std::vector<Vec>& zs, const QuadratureOptions& q) {
  std::vector<Complex> total(zs.size(), 0.0);
  for (const auto& t : f.terms) {
    const auto v = region_transform(t.region, zs, q);
    for (std::size_t j = 0; j < zs.size(); ++j) total[j] += t.coef * v[j];
  }
  return total;
}

GridSpec GridSpec::centred(int dim, double half_width, int nodes_per_axis) {
  if (dim < 1 || nodes_per_axis < 1 || !(half_width > 0.0)) fail(ErrorCode::InvalidArgument, "invalid grid");
  return GridSpec{Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width),
                  std::vector<int>(dim, nodes_per_axis)};
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int k : shape) s *= static_cast<std::size_t>(k);
  return s;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= (hi(i) - lo(i)) / shape[i];
  return v;
}

Vec GridSpec::node(std::size_t index) const {
  const int n = dim();
  Vec z(n);
  for (int i = n - 1; i >= 0; --i) {
    const auto k = static_cast<int>(index % shape[i]);
    index /= shape[i];
    z(i) = lo(i) + (k + 0.5) * (hi(i) - lo(i)) / shape[i];
  }
  return z;
}

bool GridSpec::in_outer_shell(std::size_t index, double fraction) const {
  const Vec z = node(index);
  for (int i = 0; i < dim(); ++i) {
    const double t = (z(i) - lo(i)) / (hi(i) - lo(i));
    if (t < 0.5 * fraction || t > 1.0 - 0.5 * fraction) return true;
  }
  return false;
}

GridFunction fourier_transform(const SimpleFunction& f, const GridSpec& grid, const QuadratureOptions& q) {
  const int n = f.dim();
  if (grid.dim() != n) fail(ErrorCode::DimensionMismatch, "grid dimension does not match the function");
  for (int k : grid.shape)
    if (k < 16) fail(ErrorCode::InvalidArgument, "grid resolution must be at least 16 per axis");
  GridFunction g{grid, std::vector<Complex>(grid.size())};
  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (g.values.size() + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk, end = std::min(g.values.size(), begin + chunk);
    std::vector<Vec> zs;
    zs.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) zs.push_back(grid.node(k));
    const auto v = transform_at(f, zs, q);
    std::copy(v.begin(), v.end(), g.values.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return g;
}

LowerBoundReport lower_bound_check(const TranslatedBody& e, std::size_t samples, std::uint64_t seed,
                                   const QuadratureOptions& q) {
  const int n = e.dim();
  if (!contains(e, Vec::Zero(n))) fail(ErrorCode::BodyNotContainingOrigin, "E must contain the origin");
  const Body dual = polar(e);
  std::vector<Vec> zs{Vec::Zero(n)};
  for (auto& z : sample_uniform(dual, samples, seed)) zs.push_back(std::move(z));
  const auto values = region_transform(e, zs, q);
  LowerBoundReport r;
  r.volume = region_volume(e);
  r.samples = zs.size();
  r.min_ratio = INFINITY;
  const double denom = std::cos(1.0) * r.volume;
  for (std::size_t j = 0; j < zs.size(); ++j) {
    const double ratio = std::abs(values[j]) / denom;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = zs[j];
    }
  }
  r.passed = r.min_ratio >= 1.0 - 1e-3;
  return r;
}

namespace {

struct GridPlan {
  double spacing = 0.0;
  double half_width = 0.0;
};

GridPlan plan_for(const SimpleFunction& f, const AutoGridOptions& g) {
  const Bounds b = f.support();
  const double x = std::max(b.lo.cwiseAbs().maxCoeff(), b.hi.cwiseAbs().maxCoeff());
  const double rho = 0.5 * (b.hi - b.lo).minCoeff();
  if (!(x > 0.0) || !(rho > 0.0)) fail(ErrorCode::InvalidArgument, "support of f is degenerate");
  GridPlan p;
  p.spacing = M_PI / (4.0 * x * std::max(g.spacing_factor, 1e-3));
  p.half_width = g.initial_half_width > 0.0 ? g.initial_half_width : 16.0 * M_PI / rho;
  return p;
}

// Grid number k of the automatic sequence (half width doubled each step).
GridSpec auto_grid(int n, const GridPlan& p, int k, const AutoGridOptions& g) {
  const double h = p.half_width * std::ldexp(1.0, k);
  const int per_axis = 2 * static_cast<int>(std::ceil(h / p.spacing));
  double total = std::pow(static_cast<double>(per_axis), n);
  if (per_axis > g.max_nodes_per_axis || total > static_cast<double>(g.max_total_nodes))
    fail(ErrorCode::GridDomainTooSmall, "evaluation grid reached its node cap before converging (" +
                                            std::to_string(per_axis) + " nodes per axis)");
  return GridSpec::centred(n, 0.5 * per_axis * p.spacing, std::max(per_axis, 16));
}

std::vector<double> weight_mass(const Weight& u, const GridSpec& grid) {
  std::vector<double> m(grid.size());
  const double cell = grid.cell_volume();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double v = u(grid.node(k));
    if (!std::isfinite(v)) fail(ErrorCode::NonIntegrableSingularity, "u is infinite at a grid node");
    m[k] = v * cell;
  }
  return m;
}

// sum |f^|^q u over the grid
double power_sum(const GridFunction& g, const std::vector<double>& mass, double q) {
  double s = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) s += std::pow(std::abs(g.values[k]), q) * mass[k];
  return s;
}

}  // namespace

LevelSetReport restricted_weak_type(const WeightPair& pair, const Exponents& e, const TranslatedBody& a,
                                    const AutoGridOptions& g, const IntegrateOptions& io) {
  const int n = a.dim();
  if (pair.dim != n) fail(ErrorCode::DimensionMismatch, "A and the weights differ in dimension");
  const SimpleFunction f = SimpleFunction::indicator(a);
  LevelSetReport r;
  r.l1_norm = f.l1_norm();
  const int levels = std::max(2, g.alpha_levels);
  const double a_min = 1e-2 * r.l1_norm, a_max = r.l1_norm;
  for (int i = 0; i < levels; ++i) r.alphas.push_back(a_min * std::pow(a_max / a_min, static_cast<double>(i) / (levels - 1)));

  GridFunction ft;
  std::vector<double> mass;
  const GridPlan plan = g.fixed ? GridPlan{} : plan_for(f, g);
  for (int k = 0;; ++k) {
    const GridSpec grid = g.fixed ? *g.fixed : auto_grid(n, plan, k, g);
    ft = fourier_transform(f, grid, g.quadrature);
    mass = weight_mass(pair.u, grid);
    double total = 0.0, shell = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j) {
      if (std::abs(ft.values[j]) <= a_min) continue;
      total += mass[j];
      if (grid.in_outer_shell(j)) shell += mass[j];
    }
    r.shell_fraction = total > 0.0 ? shell / total : 0.0;
    if (r.shell_fraction < g.shell_fraction) break;
    if (g.fixed)
      fail(ErrorCode::GridDomainTooSmall, "level set meets the outer shell of the fixed grid (fraction " +
                                              std::to_string(r.shell_fraction) + ")");
  }
  r.grid = ft.grid;

  // Level sets from the nodes sorted by |f^|, largest first.
  std::vector<std::size_t> order(mass.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> mod(mass.size());
  for (std::size_t j = 0; j < mod.size(); ++j) mod[j] = std::abs(ft.values[j]);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mod[x] > mod[y]; });
  std::vector<double> cum(order.size());
  double run = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) cum[j] = (run += mass[order[j]]);
  auto level_measure = [&](double alpha) {
    // number of nodes with |f^| > alpha
    auto it = std::partition_point(order.begin(), order.end(), [&](std::size_t x) { return mod[x] > alpha; });
    const auto count = static_cast<std::size_t>(it - order.begin());
    return count == 0 ? 0.0 : cum[count - 1];
  };
  for (double alpha : r.alphas) {
    const double m = level_measure(alpha);
    r.measures.push_back(m);
    const double val = alpha * std::pow(m, 1.0 / e.q);
    if (val > r.sup_quantity) {
      r.sup_quantity = val;
      r.sup_alpha = alpha;
    }
  }
  r.sup_refined = r.sup_quantity;
  r.sup_refined_alpha = r.sup_alpha;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double v = mod[order[j]];
    if (v <= a_min) break;
    if (j + 1 < order.size() && mod[order[j + 1]] == v) continue;  // end of a tie group
    const double val = v * std::pow(cum[j], 1.0 / e.q);
    if (val > r.sup_refined) {
      r.sup_refined = val;
      r.sup_refined_alpha = v;
    }
  }
  r.v_measure = integrate(pair.v, a, io);
  if (!(r.v_measure.value > 0.0)) fail(ErrorCode::ZeroDenominator, "v(A) = 0");
  r.ratio = r.sup_refined / std::pow(r.v_measure.value, 1.0 / e.p);
  return r;
}

namespace {

// (sum |f^|^q u)^{1/q} with automatic domain doubling.
double grid_norm(const SimpleFunction& f, const Weight& u, double q, const AutoGridOptions& g, GridSpec* used) {
  const int n = f.dim();
  const GridPlan plan = g.fixed ? GridPlan{} : plan_for(f, g);
  double prev = -1.0;
  for (int k = 0;; ++k) {
    const GridSpec grid = g.fixed ? *g.fixed : auto_grid(n, plan, k, g);
    const GridFunction ft = fourier_transform(f, grid, g.quadrature);
    const double s = power_sum(ft, weight_mass(u, grid), q);
    *used = grid;
    if (g.fixed) return std::pow(s, 1.0 / q);
    if (prev >= 0.0 && std::abs(s - prev) <= g.relative_tolerance * s) return std::pow(s, 1.0 / q);
    if (prev == 0.0 && s == 0.0) return 0.0;
    prev = s;
  }
}

}  // namespace

StrongTypeReport strong_type_ratio(const WeightPair& pair, const Exponents& e, const std::vector<SimpleFunction>& fs,
                                   const AutoGridOptions& g, const IntegrateOptions& io) {
  if (fs.empty()) fail(ErrorCode::EmptySampling, "no test functions");
  StrongTypeReport rep;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    if (f.dim() != pair.dim) fail(ErrorCode::DimensionMismatch, "test function dimension differs from the weights");
    StrongTypeRow row;
    row.label = "f" + std::to_string(i);
    IntegrateOptions o = io;
    o.seed = Rng::substream(io.seed, {i}).next();
    const Estimate den = f.weighted_power_integral(e.p, pair.v, o);
    if (!(den.value > 0.0)) fail(ErrorCode::ZeroDenominator, "f vanishes almost everywhere with respect to v");
    row.denominator = std::pow(den.value, 1.0 / e.p);
    row.numerator = grid_norm(f, pair.u, e.q, g, &row.grid);
    row.ratio = row.numerator / row.denominator;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

HausdorffYoungReport hausdorff_young_check(const SimpleFunction& f, double p, const AutoGridOptions& g) {
  if (!std::isfinite(p) || !(p > 1.0) || p > 2.0)
    fail(ErrorCode::ExponentOutOfRange, "Hausdorff-Young needs 1 < p <= 2");
  const double pc = conjugate(p);
  HausdorffYoungReport r;
  r.lhs = grid_norm(f, Weight::constant(1.0), pc, g, &r.grid);
  double s = 0.0;
  for (const auto& t : f.terms) s += std::pow(std::abs(t.coef), p) * region_volume(t.region);
  if (!(s > 0.0)) fail(ErrorCode::ZeroDenominator, "f = 0");
  r.rhs_without_constant = std::pow(s, 1.0 / p);
  r.ratio = r.lhs / r.rhs_without_constant;
  return r;
}

}  // namespace polarity
