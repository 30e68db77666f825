#include "polarity/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "polarity/errors.hpp"
#include "polarity/parallel.hpp"
#include "polarity/random.hpp"

namespace polarity {

const char* parameterization_name(Parameterization p) {
  switch (p) {
    case Parameterization::Interval: return "interval";
    case Parameterization::Box: return "box";
    case Parameterization::Ellipsoid: return "ellipsoid";
    case Parameterization::SymPolygon: return "sym_polygon";
    default: return "sym_polytope";
  }
}

Parameterization parameterization_from_name(const std::string& name) {
  if (name == "interval") return Parameterization::Interval;
  if (name == "box") return Parameterization::Box;
  if (name == "ellipsoid") return Parameterization::Ellipsoid;
  if (name == "sym_polygon") return Parameterization::SymPolygon;
  if (name == "sym_polytope") return Parameterization::SymPolytope;
  fail(ErrorCode::ConfigInvalid, "unknown parameterization '" + name + "'");
}

const char* optimizer_name(Optimizer o) { return o == Optimizer::Annealing ? "annealing" : "multistart"; }

Optimizer optimizer_from_name(const std::string& name) {
  if (name == "annealing") return Optimizer::Annealing;
  if (name == "multistart") return Optimizer::MultiStart;
  fail(ErrorCode::ConfigInvalid, "unknown optimizer '" + name + "'");
}

Estimate conjecture_functional(const WeightPair& pair, const Exponents& e, const Configuration& c,
                               const IntegrateOptions& io) {
  const TranslatedBody moved = translate(c.body, c.mu);
  const TranslatedBody dual = translated_polar(c.body, c.mu, c.tau);
  IntegrateOptions a = io, b = io;
  a.seed = Rng::substream(io.seed, {1}).next();
  b.seed = Rng::substream(io.seed, {2}).next();
  return power(integrate(pair.u, moved, a), 1.0 / e.q) * power(integrate(pair.w, dual, b), 1.0 / e.p_conj);
}

std::string global_integrability(const Weight& w) {
  using K = Weight::Kind;
  switch (w.kind()) {
    case K::Constant: return w.constant_value() == 0.0 ? "integrable" : "not integrable";
    case K::Grid: return "integrable";
    case K::Power:
    case K::Aniso: return "not integrable";
    case K::Scaled:
    case K::Translated: return global_integrability(w.inner());
    case K::Pow: return w.exponent() > 0.0 ? global_integrability(w.inner()) : "unknown";
    case K::Product: {
      for (const auto& f : w.factors())
        if (f.kind() == K::Grid) return "integrable";
      return "unknown";
    }
  }
  return "unknown";
}

namespace {

int parameter_count(const SearchConfig& c) {
  const int n = c.dim;
  const int angles = n * (n - 1) / 2;
  switch (c.parameterization) {
    case Parameterization::Interval: return 1 + 1 + 1;
    case Parameterization::Box: return n + angles + n + n;
    case Parameterization::Ellipsoid: return n + angles + n;
    case Parameterization::SymPolygon:
    case Parameterization::SymPolytope: return c.generators * n + c.generators + n;
  }
  return 0;
}

void validate(const SearchConfig& c) {
  if (c.dim < 1) fail(ErrorCode::ConfigInvalid, "search dimension must be >= 1");
  if (c.steps < 100) fail(ErrorCode::ConfigInvalid, "search needs at least 100 steps");
  if (c.restarts < 1) fail(ErrorCode::ConfigInvalid, "search needs at least one start");
  if (!(c.log_scale_bound > 0.0) || !std::isfinite(c.log_scale_bound) || !std::isfinite(c.translation_bound) ||
      c.translation_bound < 0.0)
    fail(ErrorCode::ConfigInvalid, "search bounds must be finite");
  switch (c.parameterization) {
    case Parameterization::Interval:
      if (c.dim != 1) fail(ErrorCode::ConfigInvalid, "interval parameterization is one dimensional");
      break;
    case Parameterization::SymPolygon:
      if (c.dim != 2) fail(ErrorCode::ConfigInvalid, "sym_polygon parameterization needs dim 2");
      if (c.generators < 2) fail(ErrorCode::ConfigInvalid, "need k >= n generators");
      break;
    case Parameterization::SymPolytope:
      if (c.dim != 3) fail(ErrorCode::ConfigInvalid, "sym_polytope parameterization needs dim 3");
      if (c.generators < 3) fail(ErrorCode::ConfigInvalid, "need k >= n generators");
      break;
    default:
      if (c.dim > 3) fail(ErrorCode::ConfigInvalid, "body search supports dimension <= 3");
  }
}

// Product of Givens rotations.
Mat rotation_from(const std::vector<double>& angles, int n) {
  Mat r = Mat::Identity(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat g = Mat::Identity(n, n);
      const double c = std::cos(angles[k]), s = std::sin(angles[k]);
      ++k;
      g(i, i) = c;
      g(j, j) = c;
      g(i, j) = -s;
      g(j, i) = s;
      r = r * g;
    }
  return r;
}

// Decodes a parameter vector. Coefficients for mu are normalized so that
// sum |c_i| <= 1, which keeps -mu inside E.
Configuration decode(const SearchConfig& c, const std::vector<double>& theta) {
  const int n = c.dim;
  const double b = c.log_scale_bound;
  auto clampv = [](double x, double lo, double hi) { return std::clamp(x, lo, hi); };
  std::size_t at = 0;
  auto next = [&] { return theta[at++]; };
  auto coefficients = [&](int k) {
    Vec co(k);
    for (int i = 0; i < k; ++i) co(i) = next();
    if (!c.vary_mu) co.setZero();
    const double s = co.cwiseAbs().sum();
    if (s > 1.0) co /= s;
    return co;
  };
  auto translation = [&] {
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = clampv(next(), -c.translation_bound, c.translation_bound);
    if (!c.vary_tau) t.setZero();
    return t;
  };
  switch (c.parameterization) {
    case Parameterization::Interval: {
      const double a = std::exp(clampv(next(), -b, b));
      Vec co = coefficients(1);
      Vec tau = translation();
      Vec mu = -co * a;
      return Configuration{TranslatedBody(Body::cube(1, a)), mu, tau};
    }
    case Parameterization::Box: {
      Vec a(n);
      for (int i = 0; i < n; ++i) a(i) = std::exp(clampv(next(), -b, b));
      std::vector<double> angles(n * (n - 1) / 2);
      for (auto& x : angles) x = next();
      Mat r = rotation_from(angles, n);
      Vec co = coefficients(n);
      Vec tau = translation();
      Vec mu = -(r * a.cwiseProduct(co));
      return Configuration{TranslatedBody(Body::box(Vec::Zero(n), a, r)), mu, tau};
    }
    case Parameterization::Ellipsoid: {
      Vec s(n);
      for (int i = 0; i < n; ++i) s(i) = std::exp(clampv(next(), -b, b));
      std::vector<double> angles(n * (n - 1) / 2);
      for (auto& x : angles) x = next();
      Mat r = rotation_from(angles, n);
      Mat shape = r * s.cwiseAbs2().cwiseInverse().asDiagonal() * r.transpose();
      shape = 0.5 * (shape + shape.transpose());
      Vec tau = translation();
      return Configuration{TranslatedBody(Body::ellipsoid(Vec::Zero(n), shape)), Vec::Zero(n), tau};
    }
    case Parameterization::SymPolygon:
    case Parameterization::SymPolytope: {
      const int k = c.generators;
      const double lim = std::exp(b);
      Mat g(k, n);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = clampv(next(), -lim, lim);
      Vec co = coefficients(k);
      Vec tau = translation();
      Vec mu = -(g.transpose() * co);
      return Configuration{TranslatedBody(Body::sym_polytope(g)), mu, tau};
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown parameterization");
}

std::vector<double> canonical_theta(const SearchConfig& c) {
  std::vector<double> t(parameter_count(c), 0.0);
  const int n = c.dim;
  if (c.parameterization == Parameterization::SymPolygon || c.parameterization == Parameterization::SymPolytope) {
    // Start from the cube's generators, extras small.
    for (int i = 0; i < c.generators; ++i)
      for (int j = 0; j < n; ++j) t[i * n + j] = (i < n && i == j) ? 1.0 : 0.0;
    for (int i = n; i < c.generators; ++i)
      for (int j = 0; j < n; ++j) t[i * n + j] = 0.1 * ((i + j) % 2 == 0 ? 1.0 : -1.0) / (i + 1);
  }
  return t;
}

std::vector<double> random_theta(const SearchConfig& c, Rng& rng) {
  std::vector<double> t(parameter_count(c));
  const int n = c.dim;
  const bool poly = c.parameterization == Parameterization::SymPolygon ||
                    c.parameterization == Parameterization::SymPolytope;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-1.0, 1.0);
  if (!poly) {
    for (int i = 0; i < n; ++i) t[i] = rng.uniform(-0.5, 0.5) * c.log_scale_bound;
  } else {
    for (int i = 0; i < c.generators * n; ++i) t[i] = rng.normal();
  }
  for (std::size_t i = t.size() - n; i < t.size(); ++i) t[i] *= c.translation_bound;
  return t;
}

struct Evaluator {
  std::function<Estimate(const std::vector<double>&)> fn;
  bool minimize = false;
  int evaluations = 0;
  int failures = 0;

  // Objective in maximization form; failures map to -inf.
  double operator()(const std::vector<double>& theta, Estimate* est = nullptr) {
    ++evaluations;
    try {
      Estimate v = fn(theta);
      if (est) *est = v;
      if (!std::isfinite(v.value)) return -INFINITY;
      return minimize ? -v.value : v.value;
    } catch (const Error&) {
      ++failures;
      return -INFINITY;
    }
  }
};

struct Chain {
  std::vector<double> best;
  double best_obj = -INFINITY;
  std::vector<double> trajectory;  // best objective so far per step
};

Chain anneal(Evaluator& ev, const SearchConfig& c, std::vector<double> start, double t0, Rng& rng) {
  Chain ch;
  double cur_obj = ev(start);
  std::vector<double> cur = start;
  ch.best = cur;
  ch.best_obj = cur_obj;
  double temp = t0, step = c.step_size;
  for (int k = 0; k < c.steps; ++k) {
    std::vector<double> prop = cur;
    for (auto& x : prop) x += step * rng.normal();
    const double obj = ev(prop);
    const double delta = obj - cur_obj;
    bool accept = delta >= 0.0;
    if (!accept && std::isfinite(obj) && temp > 0.0) accept = rng.uniform() < std::exp(delta / temp);
    if (!std::isfinite(cur_obj) && std::isfinite(obj)) accept = true;
    if (accept) {
      cur = prop;
      cur_obj = obj;
    }
    if (cur_obj > ch.best_obj) {
      ch.best_obj = cur_obj;
      ch.best = cur;
    }
    ch.trajectory.push_back(ch.best_obj);
    temp *= c.cooling;
    step *= c.step_decay;
  }
  return ch;
}

Chain local_search(Evaluator& ev, const SearchConfig& c, std::vector<double> start, Rng& rng, int steps) {
  Chain ch;
  ch.best = start;
  ch.best_obj = ev(start);
  double step = c.step_size;
  int misses = 0;
  for (int k = 0; k < steps; ++k) {
    std::vector<double> prop = ch.best;
    for (auto& x : prop) x += step * rng.normal();
    const double obj = ev(prop);
    if (obj > ch.best_obj) {
      ch.best_obj = obj;
      ch.best = prop;
      misses = 0;
    } else if (++misses >= 10) {
      step *= 0.5;
      misses = 0;
    }
    step *= c.step_decay;
    ch.trajectory.push_back(ch.best_obj);
  }
  return ch;
}

double interquartile_range(std::vector<double> v) {
  if (v.size() < 4) return 0.0;
  std::sort(v.begin(), v.end());
  auto at = [&](double q) { return v[static_cast<std::size_t>(q * (v.size() - 1))]; };
  return at(0.75) - at(0.25);
}

SearchReport run_search(const SearchConfig& c, const std::function<Estimate(const Configuration&, std::uint64_t)>& value,
                        bool minimize) {
  validate(c);
  SearchReport rep;
  rep.direction = minimize ? "min" : "max";
  auto make_eval = [&](std::uint64_t stream) {
    Evaluator ev;
    ev.minimize = minimize;
    ev.fn = [&, stream](const std::vector<double>& theta) { return value(decode(c, theta), stream); };
    return ev;
  };

  std::vector<Chain> chains;
  int evaluations = 0, failures = 0;
  if (c.optimizer == Optimizer::Annealing) {
    Evaluator probe = make_eval(0);
    std::vector<double> probes;
    for (int i = 0; i < c.probes; ++i) {
      Rng rng = Rng::substream(c.seed, {0xA0, static_cast<std::uint64_t>(i)});
      const double v = probe(random_theta(c, rng));
      if (std::isfinite(v)) probes.push_back(v);
    }
    rep.initial_temperature = interquartile_range(probes);
    Evaluator ev = make_eval(0);
    Rng rng = Rng::substream(c.seed, {0xA1});
    chains.push_back(anneal(ev, c, canonical_theta(c), rep.initial_temperature, rng));
    evaluations = probe.evaluations + ev.evaluations;
    failures = probe.failures + ev.failures;
  } else {
    const int per_start = std::max(1, c.steps / c.restarts);
    chains.resize(c.restarts);
    std::vector<int> evs(c.restarts), fails(c.restarts);
    parallel_for(static_cast<std::size_t>(c.restarts), [&](std::size_t s) {
      Rng rng = Rng::substream(c.seed, {0xB0, s});
      Evaluator ev = make_eval(0);
      std::vector<double> start = s == 0 ? canonical_theta(c) : random_theta(c, rng);
      chains[s] = local_search(ev, c, start, rng, per_start);
      evs[s] = ev.evaluations;
      fails[s] = ev.failures;
    });
    for (int s = 0; s < c.restarts; ++s) {
      evaluations += evs[s];
      failures += fails[s];
    }
  }

  // Global best-so-far trajectory over the chains in order.
  double best = -INFINITY;
  const Chain* winner = nullptr;
  int step = 0;
  for (const auto& ch : chains) {
    for (double v : ch.trajectory) {
      best = std::max(best, v);
      if (std::isfinite(best)) rep.trajectory.push_back({step, minimize ? -best : best});
      ++step;
    }
    if (!winner || ch.best_obj > winner->best_obj) winner = &ch;
  }
  rep.evaluations = evaluations;
  rep.failed_evaluations = failures;
  if (!winner || !std::isfinite(winner->best_obj)) fail(ErrorCode::NoConvergence, "no feasible configuration found");
  rep.best_parameters = winner->best;
  rep.best_config = decode(c, winner->best);
  rep.best_estimate = value(*rep.best_config, 0);
  rep.best_value = rep.best_estimate.value;

  // Plateau over the last quarter of the trajectory.
  if (rep.trajectory.size() >= 8) {
    const double late = rep.trajectory[rep.trajectory.size() * 3 / 4].value;
    const double end = rep.trajectory.back().value;
    rep.upper_bound_evidence = std::abs(end - late) <= 0.01 * std::max(std::abs(end), 1e-300);
  }
  rep.lower_bound_evidence = rep.best_value > 1e-8;
  return rep;
}

}  // namespace

SearchReport conjecture_sup_search(const WeightPair& pair, const Exponents& e, const SearchConfig& c) {
  if (pair.dim != c.dim) fail(ErrorCode::DimensionMismatch, "search dimension differs from the weights");
  if (!pair.w.locally_integrable(c.dim)) fail(ErrorCode::NotLocallyIntegrable, "w is not locally integrable");
  SearchReport rep = run_search(
      c,
      [&](const Configuration& cfg, std::uint64_t) {
        IntegrateOptions io = c.integrate;
        return conjecture_functional(pair, e, cfg, io);
      },
      false);
  rep.notes.push_back("u: " + global_integrability(pair.u));
  rep.notes.push_back("w: " + global_integrability(pair.w));
  rep.notes.push_back("results are evidence within the parameterized family, not bounds");
  return rep;
}

SearchReport mahler_search(const SearchConfig& cfg, bool minimize) {
  SearchConfig c = cfg;
  c.vary_mu = false;
  c.vary_tau = false;
  SearchReport rep = run_search(
      c, [&](const Configuration& conf, std::uint64_t) { return mahler_volume(conf.body.base, c.integrate); }, minimize);
  const int n = c.dim;
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  const double cube = std::pow(4.0, n) / f;
  const double ball = unit_ball_volume(n) * unit_ball_volume(n);
  const double tol = 3.0 * rep.best_estimate.abs_error + 1e-9 * cube;
  if (minimize) {
    rep.lower_bound_evidence = rep.best_value >= cube - tol;
    rep.notes.push_back("cube value " + std::to_string(cube));
  } else {
    rep.upper_bound_evidence = rep.best_value <= ball + tol;
    rep.notes.push_back("ball value " + std::to_string(ball));
  }
  return rep;
}

std::vector<DilationPoint> dilation_ray(const WeightPair& pair, const Exponents& e, const Body& body, const Vec& mu,
                                        const Vec& tau, const std::vector<double>& scales, const IntegrateOptions& io) {
  std::vector<DilationPoint> out;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double s = scales[i];
    const Body b = scaled(body, s);
    const Vec m = s * mu;
    IntegrateOptions a = io, bb = io;
    a.seed = Rng::substream(io.seed, {i, 1}).next();
    bb.seed = Rng::substream(io.seed, {i, 2}).next();
    const TranslatedBody moved = translate(b, m);
    const TranslatedBody dual = translated_polar(b, m, tau);
    DilationPoint p;
    p.scale = s;
    p.u_part = std::pow(integrate(pair.u, moved, a).value, 1.0 / e.q);
    p.w_part = std::pow(integrate(pair.w, dual, bb).value, 1.0 / e.p_conj);
    p.value = p.u_part * p.w_part;
    out.push_back(p);
  }
  return out;
}

}  // namespace polarity
