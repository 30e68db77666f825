#include <atomic>
#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/geometry.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"
#include "polytope_internal.hpp"

namespace polarity {

namespace {

constexpr std::uint64_t kBlockSize = 65536;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::optional<double> polytope_exact_volume(const Body& body) {
  const int n = body.dim();
  if (const auto* v = body.get_if<SymPolytopeV>()) {
    if (v->generators.rows() == n)
      return std::pow(2.0, n) * std::abs(v->generators.determinant()) / factorial(n);
  }
  if (n > kMaxExactPolytopeDim) return std::nullopt;
  const auto& data = body.polytope();
  if (n == 1) return data.vertices.maxCoeff() - data.vertices.minCoeff();
  if (n == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (Eigen::Index i = 0; i < data.vertices.rows(); ++i) pts.emplace_back(data.vertices(i, 0), data.vertices(i, 1));
    return detail::polygon_area(detail::convex_hull_2d(pts));
  }
  return detail::polytope_volume_3d(data);
}

VolumeEstimate monte_carlo_volume(const TranslatedBody& region, const VolumeOptions& opts) {
  const int n = region.dim();
  if (n > kMaxMonteCarloDim)
    fail(ErrorCode::InvalidArgument, "Monte Carlo volume supports dimension <= " + std::to_string(kMaxMonteCarloDim));
  if (opts.samples < kMinMonteCarloSamples)
    fail(ErrorCode::SampleBudgetTooSmall, "Monte Carlo volume needs at least 1000 samples");
  const Bounds bb = bounding_box(region);
  const std::uint64_t blocks = (opts.samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = Rng::substream(opts.seed, {static_cast<std::uint64_t>(b)});
    const std::uint64_t count = std::min<std::uint64_t>(kBlockSize, opts.samples - b * kBlockSize);
    Vec x(n);
    std::uint64_t h = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) x(i) = rng.uniform(bb.lo(i), bb.hi(i));
      if (contains(region, x)) ++h;
    }
    hits[b] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double frac = static_cast<double>(total) / static_cast<double>(opts.samples);
  const double bv = bb.volume();
  VolumeEstimate e;
  e.value = bv * frac;
  e.abs_error = 3.0 * bv * std::sqrt(frac * (1.0 - frac) / static_cast<double>(opts.samples));
  e.method = Method::MonteCarlo;
  e.samples = opts.samples;
  e.seed = opts.seed;
  return e;
}

}  // namespace

std::optional<double> exact_volume(const Body& body) {
  const int n = body.dim();
  if (const auto* b = body.get_if<Box>()) return (2.0 * b->half_extents).prod();
  if (const auto* e = body.get_if<Ellipsoid>()) return unit_ball_volume(n) / std::sqrt(e->shape.determinant());
  return polytope_exact_volume(body);
}

VolumeEstimate volume(const TranslatedBody& region, const VolumeOptions& opts) {
  if (opts.method != VolumeMethod::MonteCarlo) {
    if (auto v = exact_volume(region.base)) return VolumeEstimate::exact(*v);
    if (opts.method == VolumeMethod::Exact)
      fail(ErrorCode::InvalidArgument, "no exact volume formula for this " + region.base.variant_name() +
                                           " in dimension " + std::to_string(region.dim()));
  }
  return monte_carlo_volume(region, opts);
}

VolumeEstimate mahler_volume(const Body& body, const VolumeOptions& opts) {
  if (!body.is_origin_symmetric())
    fail(ErrorCode::NonSymmetricBody, "Mahler volume needs a body symmetric about the origin");
  Body dual = polar(body);
  VolumeOptions dual_opts = opts;
  dual_opts.seed = Rng::substream(opts.seed, {1}).next();
  return volume(body, opts) * volume(dual, dual_opts);
}

}  // namespace polarity
