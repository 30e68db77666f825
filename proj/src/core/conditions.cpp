#include "polarity/conditions.hpp"

#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"

namespace polarity {

const char* family_name(Family f) {
  switch (f) {
    case Family::Cubes: return "cubes";
    case Family::Rectanguloids: return "rectanguloids";
    case Family::Ellipsoids: return "ellipsoids";
    default: return "sym_polytopes";
  }
}

Family family_from_name(const std::string& name) {
  if (name == "cubes") return Family::Cubes;
  if (name == "rectanguloids") return Family::Rectanguloids;
  if (name == "ellipsoids") return Family::Ellipsoids;
  if (name == "sym_polytopes") return Family::SymPolytopes;
  fail(ErrorCode::ConfigInvalid, "unknown family '" + name + "'");
}

std::vector<double> ConditionSampling::dyadic_scales(int lo_exp, int hi_exp) {
  std::vector<double> s;
  for (int k = lo_exp; k <= hi_exp; ++k) s.push_back(std::ldexp(1.0, k));
  return s;
}

namespace {

Vec uniform_vec(Rng& rng, int n, double half) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(-half, half);
  return v;
}

Mat random_rotation(Rng& rng, int n) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

Vec log_uniform_extents(Rng& rng, int n, double scale, double spread) {
  Vec a(n);
  for (int i = 0; i < n; ++i) a(i) = scale * std::exp(rng.uniform(-spread, spread));
  return a;
}

Configuration centred(int n, Family family, double L) {
  Body b = family == Family::Ellipsoids ? Body::ball(n, L) : Body::cube(n, L);
  return Configuration{TranslatedBody(b), Vec::Zero(n), Vec::Zero(n)};
}

Configuration cube_configuration(Rng& rng, int n, double L) {
  Vec c = L * uniform_vec(rng, n, 1.0);
  Vec y = uniform_vec(rng, n, 1.0);
  Vec tau = uniform_vec(rng, n, 1.0) / L;
  return Configuration{TranslatedBody(Body::cube(n, L, c)), -(c + L * y), tau};
}

Configuration sampled(Rng& rng, int n, Family family, double L) {
  const double spread = std::log(4.0);
  switch (family) {
    case Family::Cubes: return cube_configuration(rng, n, L);
    case Family::Rectanguloids: {
      Vec c = L * uniform_vec(rng, n, 1.0);
      Mat rot = random_rotation(rng, n);
      Vec a = log_uniform_extents(rng, n, L, spread);
      Vec y = uniform_vec(rng, n, 1.0);
      Vec tau = uniform_vec(rng, n, 1.0) / L;
      return Configuration{TranslatedBody(Body::box(c, a, rot)), -(c + rot * a.cwiseProduct(y)), tau};
    }
    case Family::Ellipsoids: {
      Vec c = L * uniform_vec(rng, n, 1.0);
      Mat rot = random_rotation(rng, n);
      Vec s = log_uniform_extents(rng, n, L, spread);
      Mat shape = rot * s.cwiseAbs2().cwiseInverse().asDiagonal() * rot.transpose();
      shape = 0.5 * (shape + shape.transpose());
      Vec tau = uniform_vec(rng, n, 1.0) / L;
      return Configuration{TranslatedBody(Body::ellipsoid(c, shape)), -c, tau};
    }
    case Family::SymPolytopes: {
      const int k = n + 1 + static_cast<int>(rng.index(3));
      Mat g(k, n);
      for (int i = 0; i < k; ++i) {
        Vec d(n);
        for (int j = 0; j < n; ++j) d(j) = rng.normal();
        g.row(i) = (L * std::exp(rng.uniform(-std::log(2.0), std::log(2.0))) / d.norm()) * d.transpose();
      }
      Vec c = L * uniform_vec(rng, n, 1.0);
      Vec lambda(k);
      for (int i = 0; i < k; ++i) lambda(i) = rng.uniform() * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      lambda /= std::max(lambda.cwiseAbs().sum(), 1e-300);
      Vec inside = g.transpose() * lambda;
      Vec tau = uniform_vec(rng, n, 1.0) / L;
      return Configuration{TranslatedBody(Body::sym_polytope(g), c), -(c + inside), tau};
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

const std::vector<double>& effective_scales(const ConditionSampling& s, std::vector<double>& storage) {
  storage = s.scales.empty() ? ConditionSampling::dyadic_scales(-8, 8) : s.scales;
  for (double L : storage)
    if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorCode::ConfigInvalid, "scales must be positive");
  if (storage.empty()) fail(ErrorCode::EmptySampling, "no scales to sample");
  return storage;
}

}  // namespace

std::vector<std::vector<Configuration>> sample_configurations(int n, Family family, const ConditionSampling& s) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (s.samples_per_scale < 0) fail(ErrorCode::ConfigInvalid, "samples_per_scale must be >= 0");
  std::vector<double> storage;
  const auto& scales = effective_scales(s, storage);
  std::vector<std::vector<Configuration>> out(scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double L = scales[i];
    out[i].push_back(centred(n, family, L));
    // Streams depend on the sample index only, so the family is self-similar
    // across scales.
    for (int j = 0; j < s.samples_per_scale; ++j) {
      Rng rng = Rng::substream(s.seed, {static_cast<std::uint64_t>(j), 0});
      if (family == Family::SymPolytopes) {
        out[i].push_back(cube_configuration(rng, n, L));
      } else {
        out[i].push_back(sampled(rng, n, family, L));
      }
    }
    if (family == Family::SymPolytopes) {
      for (int j = 0; j < s.samples_per_scale; ++j) {
        Rng rng = Rng::substream(s.seed, {static_cast<std::uint64_t>(j), 1});
        out[i].push_back(sampled(rng, n, family, L));
      }
    }
  }
  return out;
}

namespace {

struct Evaluated {
  double body_scale = 0.0;
  Estimate first, second;
  double polar_volume_ratio = 0.0;
};

enum class Kind { N, NQPrime };

Evaluated evaluate(const WeightPair& pair, const Exponents& e, const Configuration& cfg, double L, Kind kind,
                   const IntegrateOptions& base, std::uint64_t stream) {
  TranslatedBody f = translated_polar(cfg.body, cfg.mu, cfg.tau);
  auto opts = [&](std::uint64_t k) {
    IntegrateOptions o = base;
    o.seed = Rng::substream(base.seed, {stream, k}).next();
    return o;
  };
  Evaluated r;
  r.body_scale = L;
  const Estimate uF = integrate(pair.u, f, opts(0));
  const Estimate uE = integrate(pair.u, cfg.body, opts(1));
  if (kind == Kind::N) {
    const Estimate wE = integrate(pair.w, cfg.body, opts(2));
    const Estimate wF = integrate(pair.w, f, opts(3));
    r.first = power(uF, 1.0 / e.q) * power(wE, 1.0 / e.p_conj);
    r.second = power(uE, 1.0 / e.q) * power(wF, 1.0 / e.p_conj);
    return r;
  }
  const Estimate vE = integrate(pair.v, cfg.body, opts(2));
  const Estimate vF = integrate(pair.v, f, opts(3));
  const Estimate volE = volume(cfg.body, opts(4));
  const Estimate volF = volume(f, opts(5));
  // |Q°| for the cube re-centred at the origin.
  const Body& base_body = cfg.body.base;
  Body centred_q = base_body;
  if (const auto* b = base_body.get_if<Box>()) centred_q = Body::box(Vec::Zero(b->center.size()), b->half_extents, b->rotation);
  const Estimate volQpolar = volume(polar(centred_q), opts(6));
  if (vF.value <= 0.0 || vE.value <= 0.0)
    fail(ErrorCode::ZeroMeasureCube, "v vanishes on a sampled set; the N_Q' products are undefined");
  // A = u(Q)^{1/q}|Q°| / v(F)^{1/p}, B = u(F)^{1/q}|Q| / v(Q)^{1/p}.
  r.first = quotient(power(uE, 1.0 / e.q) * volQpolar, power(vF, 1.0 / e.p));
  r.second = quotient(power(uF, 1.0 / e.q) * volE, power(vE, 1.0 / e.p));
  r.polar_volume_ratio = volQpolar.value / volF.value;
  return r;
}

ConditionReport run_check(const WeightPair& pair, const Exponents& e, Family family, const ConditionSampling& s,
                          Kind kind) {
  const int n = pair.dim;
  if (!pair.u.locally_integrable(n)) fail(ErrorCode::NotLocallyIntegrable, "u is not locally integrable");
  if (kind == Kind::N && !pair.w.locally_integrable(n))
    fail(ErrorCode::NotLocallyIntegrable, "w = " + pair.w.describe() + " is not locally integrable");
  const auto configs = sample_configurations(n, family, s);
  std::vector<double> storage;
  const auto& scales = effective_scales(s, storage);

  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::size_t j = 0; j < configs[i].size(); ++j) index.emplace_back(i, j);
  std::vector<Evaluated> values(index.size());
  parallel_for(index.size(), [&](std::size_t k) {
    auto [i, j] = index[k];
    values[k] = evaluate(pair, e, configs[i][j], scales[i], kind, s.integrate,
                         (static_cast<std::uint64_t>(i) << 32) | j);
  });

  ConditionReport rep;
  rep.condition = kind == Kind::N ? "N" : "N_Q'";
  rep.family = family;
  rep.configurations = index.size();
  rep.warnings = pair.warnings;
  const std::string first_name = kind == Kind::N ? "u(F)^(1/q) w(E)^(1/p')" : "u(Q)^(1/q) |Q°| / v(F)^(1/p)";
  const std::string second_name = kind == Kind::N ? "u(E)^(1/q) w(F)^(1/p')" : "u(F)^(1/q) |Q| / v(Q)^(1/p)";
  // For N the first product grows with L when it diverges; for N_Q' it is the
  // second. The other product is indexed by 1/L so growth always reads as a
  // positive slope at the upper end.
  const bool first_by_L = kind == Kind::N;
  TrendSeries first_max{"first_max", {}, std::nullopt};
  TrendSeries second_max{"second_max", {}, std::nullopt};
  TrendSeries first_centred{"first_centred", {}, std::nullopt};
  TrendSeries second_centred{"second_centred", {}, std::nullopt};

  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double L = scales[i];
    const double idx_first = first_by_L ? L : 1.0 / L;
    const double idx_second = first_by_L ? 1.0 / L : L;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (index[k].first != i) continue;
      const auto& v = values[k];
      m1 = std::max(m1, v.first.value);
      m2 = std::max(m2, v.second.value);
      if (index[k].second == 0) {
        first_centred.points.push_back({idx_first, v.first.value, L});
        second_centred.points.push_back({idx_second, v.second.value, L});
      }
      for (int which = 0; which < 2; ++which) {
        const Estimate& est = which == 0 ? v.first : v.second;
        if (est.value > rep.sup_estimate || (k == 0 && which == 0)) {
          rep.sup_estimate = est.value;
          rep.sup = est;
          rep.witness = configs[i][index[k].second];
          rep.witness_product = which == 0 ? first_name : second_name;
        }
      }
      rep.rows.push_back({L, v.first, v.second, v.polar_volume_ratio});
    }
    first_max.points.push_back({idx_first, m1, L});
    second_max.points.push_back({idx_second, m2, L});
  }

  auto assess = [&](TrendSeries& t) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : t.points) {
      if (!(p.value > 0.0)) return;
      pts.emplace_back(p.scale, p.value);
    }
    if (pts.size() < 4) return;
    t.assessment = assess_trend(pts, s.thresholds);
  };
  for (auto* t : {&first_max, &second_max, &first_centred, &second_centred}) assess(*t);

  const TrendSeries& primary = first_by_L ? first_max : second_max;
  if (primary.assessment) {
    rep.slope = primary.assessment->full.slope;
    rep.r_squared = primary.assessment->full.r_squared;
  }
  bool all_bounded = true, any_diverging = false;
  for (const auto* t : {&first_max, &second_max}) {
    if (!t->assessment) {
      all_bounded = false;
      continue;
    }
    if (t->assessment->verdict == VerdictKind::Diverging) {
      any_diverging = true;
      rep.growth_slope = std::max(rep.growth_slope, t->assessment->growth_slope);
    }
    if (t->assessment->verdict != VerdictKind::Bounded) all_bounded = false;
  }
  rep.verdict = any_diverging ? VerdictKind::Diverging : (all_bounded ? VerdictKind::Bounded : VerdictKind::Inconclusive);
  rep.trends = {first_max, second_max, first_centred, second_centred};

  // Measured doubling-type ratios at sqrt(n) for the centred bodies.
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const Configuration& c = configs[i][0];
    IntegrateOptions o = s.integrate;
    o.seed = Rng::substream(s.integrate.seed, {0x5157, i}).next();
    TranslatedBody big = scaled(c.body, root_n);
    const Estimate u0 = integrate(pair.u, c.body, o), u1 = integrate(pair.u, big, o);
    if (u0.value > 0.0) rep.sqrt_n_ratio_u.emplace_back(scales[i], u1.value / u0.value);
    if (kind == Kind::N) {
      const Estimate w0 = integrate(pair.w, c.body, o), w1 = integrate(pair.w, big, o);
      if (w0.value > 0.0) rep.sqrt_n_ratio_w.emplace_back(scales[i], w1.value / w0.value);
    }
  }
  return rep;
}

}  // namespace

ConditionReport check_condition(const WeightPair& pair, const Exponents& exps, Family family,
                                const ConditionSampling& sampling) {
  return run_check(pair, exps, family, sampling, Kind::N);
}

ConditionReport check_nq_prime(const WeightPair& pair, const Exponents& exps, const ConditionSampling& sampling) {
  return run_check(pair, exps, Family::Cubes, sampling, Kind::NQPrime);
}

}  // namespace polarity
