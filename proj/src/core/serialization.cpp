#include "polarity/serialization.hpp"

#include <cmath>

#include "polarity/errors.hpp"

namespace polarity {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ConfigInvalid, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) bad(std::string("field '") + name + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(std::string("field '") + name + "' must be finite");
  return x;
}

double number_or(const Json& j, const char* name, double fallback) {
  return j.is_object() && j.contains(name) ? number(j, name) : fallback;
}

int integer_or(const Json& j, const char* name, int fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  const Json& v = j.at(name);
  if (!v.is_number_integer()) bad(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

bool bool_or(const Json& j, const char* name, bool fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  const Json& v = j.at(name);
  if (!v.is_boolean()) bad(std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

std::string string_or(const Json& j, const char* name, const std::string& fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  const Json& v = j.at(name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, const char* name) {
  if (!v.is_array()) bad(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (x.is_array()) {
      for (const auto& y : x) {
        if (!y.is_number()) bad(std::string("field '") + name + "' must hold numbers");
        out.push_back(y.get<double>());
      }
    } else {
      if (!x.is_number()) bad(std::string("field '") + name + "' must hold numbers");
      out.push_back(x.get<double>());
    }
  }
  for (double x : out)
    if (!std::isfinite(x)) bad(std::string("field '") + name + "' must be finite");
  return out;
}

std::vector<double> scale_list(const Json& j, const char* list, const char* exps) {
  if (j.contains(list)) return numbers(j.at(list), list);
  if (j.contains(exps)) {
    auto e = numbers(j.at(exps), exps);
    if (e.size() != 2 || e[0] > e[1]) bad(std::string("field '") + exps + "' must be [lo, hi]");
    return ConditionSampling::dyadic_scales(static_cast<int>(e[0]), static_cast<int>(e[1]));
  }
  return {};
}

Json pairs_json(const std::vector<std::pair<double, double>>& v) {
  Json a = Json::array();
  for (const auto& [x, y] : v) a.push_back({x, y});
  return a;
}

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) a.push_back(m(i, k));
  return a;
}

Vec vec_from_json(const Json& j, const char* name, int expected) {
  auto xs = numbers(field(j, name), name);
  if (expected >= 0 && static_cast<int>(xs.size()) != expected)
    bad(std::string("field '") + name + "' must have " + std::to_string(expected) + " entries");
  return Eigen::Map<Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Mat mat_from_json(const Json& j, const char* name, int cols) {
  auto xs = numbers(field(j, name), name);
  if (cols <= 0 || xs.empty() || xs.size() % cols != 0)
    bad(std::string("field '") + name + "' must be a row-major array with " + std::to_string(cols) + " columns");
  const Eigen::Index rows = static_cast<Eigen::Index>(xs.size() / cols);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = xs[i * cols + k];
  return m;
}

Json to_json(const Body& b) {
  Json j;
  j["variant"] = b.variant_name();
  j["dim"] = b.dim();
  if (auto* x = b.get_if<Box>()) {
    j["center"] = to_json(x->center);
    j["half_extents"] = to_json(x->half_extents);
    j["rotation"] = to_json(x->rotation);
  } else if (auto* e = b.get_if<Ellipsoid>()) {
    j["center"] = to_json(e->center);
    j["shape"] = to_json(e->shape);
  } else if (auto* s = b.get_if<SymPolytopeV>()) {
    j["generators"] = to_json(s->generators);
  } else if (auto* h = b.get_if<PolytopeH>()) {
    j["normals"] = to_json(h->normals);
    j["offsets"] = to_json(h->offsets);
  }
  return j;
}

Json to_json(const TranslatedBody& r) {
  Json j = to_json(r.base);
  if (r.has_shift()) j["shift"] = to_json(r.shift);
  return j;
}

Body body_from_json(const Json& j) {
  const std::string variant = string_or(j, "variant", "");
  const Json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) bad("field 'dim' must be a positive integer");
  const int n = d.get<int>();
  if (variant == "box") {
    Vec c = j.contains("center") ? vec_from_json(j, "center", n) : Vec::Zero(n);
    Vec h = vec_from_json(j, "half_extents", n);
    Mat r = j.contains("rotation") ? mat_from_json(j, "rotation", n) : Mat::Identity(n, n);
    if (r.rows() != n) bad("field 'rotation' must be n x n");
    return Body::box(c, h, r);
  }
  if (variant == "ellipsoid") {
    Vec c = j.contains("center") ? vec_from_json(j, "center", n) : Vec::Zero(n);
    Mat s = mat_from_json(j, "shape", n);
    if (s.rows() != n) bad("field 'shape' must be n x n");
    return Body::ellipsoid(c, s);
  }
  if (variant == "sympoly_v") return Body::sym_polytope(mat_from_json(j, "generators", n));
  if (variant == "poly_h") {
    Mat a = mat_from_json(j, "normals", n);
    Vec b = vec_from_json(j, "offsets", static_cast<int>(a.rows()));
    return Body::h_polytope(a, b);
  }
  bad("unknown body variant '" + variant + "'");
}

TranslatedBody region_from_json(const Json& j) {
  Body b = body_from_json(j);
  if (!j.contains("shift")) return TranslatedBody(b);
  return TranslatedBody(b, vec_from_json(j, "shift", b.dim()));
}

Json to_json(const Estimate& e) {
  return Json{{"value", e.value},
              {"abs_error", e.abs_error},
              {"method", method_name(e.method)},
              {"samples", e.samples},
              {"seed", e.seed}};
}

Json to_json(const Weight& w) {
  using K = Weight::Kind;
  switch (w.kind()) {
    case K::Constant: return {{"kind", "constant"}, {"value", w.constant_value()}};
    case K::Power: return {{"kind", "power"}, {"alpha", w.alpha()}, {"dim", w.dim()}};
    case K::Aniso: return {{"kind", "aniso"}, {"alphas", to_json(w.alphas())}};
    case K::Grid: {
      const auto& g = w.grid_data();
      return {{"kind", "grid"},
              {"lo", to_json(g.lo)},
              {"hi", to_json(g.hi)},
              {"shape", g.shape},
              {"values", g.values}};
    }
    case K::Product: {
      Json f = Json::array();
      for (const auto& x : w.factors()) f.push_back(to_json(x));
      return {{"kind", "product"}, {"factors", f}};
    }
    case K::Scaled: return {{"kind", "scaled"}, {"factor", w.scale()}, {"weight", to_json(w.inner())}};
    case K::Translated:
      return {{"kind", "translated"}, {"shift", to_json(w.shift())}, {"weight", to_json(w.inner())}};
    case K::Pow: return {{"kind", "pow"}, {"exponent", w.exponent()}, {"weight", to_json(w.inner())}};
  }
  return {};
}

Weight weight_from_json(const Json& j, int default_dim) {
  const std::string kind = string_or(j, "kind", "");
  if (kind == "constant") return Weight::constant(number(j, "value"));
  if (kind == "power") {
    const int n = integer_or(j, "dim", default_dim);
    if (n < 1) bad("power weight needs a dimension");
    return Weight::power(number(j, "alpha"), n);
  }
  if (kind == "aniso") return Weight::aniso(vec_from_json(j, "alphas"));
  if (kind == "grid") {
    Vec lo = vec_from_json(j, "lo");
    Vec hi = vec_from_json(j, "hi", static_cast<int>(lo.size()));
    std::vector<int> shape;
    const Json& s = field(j, "shape");
    if (!s.is_array()) bad("field 'shape' must be an array");
    for (const auto& x : s) {
      if (!x.is_number_integer()) bad("field 'shape' must hold integers");
      shape.push_back(x.get<int>());
    }
    if (j.contains("values")) return Weight::grid(lo, hi, shape, numbers(j.at("values"), "values"));
    const Json& g = field(j, "generator");
    const std::string type = string_or(g, "type", "");
    Vec c = g.contains("center") ? vec_from_json(g, "center", static_cast<int>(lo.size())) : Vec::Zero(lo.size());
    if (type == "gaussian") {
      const double sigma = number_or(g, "sigma", 1.0);
      if (!(sigma > 0.0)) bad("gaussian sigma must be positive");
      return Weight::grid_from(lo, hi, shape, [c, sigma](const Vec& x) {
        return std::exp(-(x - c).squaredNorm() / (2.0 * sigma * sigma));
      });
    }
    if (type == "exp") {
      const double rate = number_or(g, "rate", 1.0);
      if (!(rate > 0.0)) bad("exp rate must be positive");
      return Weight::grid_from(lo, hi, shape, [c, rate](const Vec& x) { return std::exp(-rate * (x - c).norm()); });
    }
    bad("unknown grid generator '" + type + "'");
  }
  if (kind == "product") {
    const Json& f = field(j, "factors");
    if (!f.is_array() || f.empty()) bad("field 'factors' must be a nonempty array");
    std::vector<Weight> ws;
    for (const auto& x : f) ws.push_back(weight_from_json(x, default_dim));
    return Weight::product(std::move(ws));
  }
  if (kind == "scaled") return Weight::scaled(number(j, "factor"), weight_from_json(field(j, "weight"), default_dim));
  if (kind == "translated")
    return Weight::translated(vec_from_json(j, "shift"), weight_from_json(field(j, "weight"), default_dim));
  if (kind == "pow") return Weight::pow(weight_from_json(field(j, "weight"), default_dim), number(j, "exponent"));
  bad("unknown weight kind '" + kind + "'");
}

Json to_json(const SimpleFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    Json c = t.coef.imag() == 0.0 ? Json(t.coef.real()) : Json::array({t.coef.real(), t.coef.imag()});
    terms.push_back({{"coef", c}, {"region", to_json(t.region)}});
  }
  return {{"terms", terms}};
}

SimpleFunction simple_function_from_json(const Json& j) {
  const Json& terms = field(j, "terms");
  if (!terms.is_array() || terms.empty()) bad("field 'terms' must be a nonempty array");
  SimpleFunction f;
  for (const auto& t : terms) {
    Complex c = 1.0;
    if (t.contains("coef")) {
      const Json& v = t.at("coef");
      if (v.is_number()) {
        c = v.get<double>();
      } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        c = Complex(v[0].get<double>(), v[1].get<double>());
      } else {
        bad("field 'coef' must be a number or [re, im]");
      }
    }
    f.terms.push_back(SimpleTerm{c, region_from_json(field(t, "region"))});
  }
  const int n = f.terms.front().region.dim();
  for (const auto& t : f.terms)
    if (t.region.dim() != n) fail(ErrorCode::DimensionMismatch, "simple function regions differ in dimension");
  return f;
}

Exponents exponents_from_json(const Json& j) { return Exponents::make(number(j, "p"), number(j, "q")); }

WeightPair pair_from_json(const Json& j, const Exponents& e) {
  const Json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) bad("field 'dim' must be a positive integer");
  const int n = d.get<int>();
  Weight u = weight_from_json(field(j, "u"), n);
  const bool has_v = j.contains("v"), has_w = j.contains("w");
  if (has_v == has_w) bad("pair needs exactly one of 'v' and 'w'");
  auto check_dim = [n](const Weight& w, const char* name) {
    if (w.dim() != 0 && w.dim() != n)
      fail(ErrorCode::DimensionMismatch, std::string("weight '") + name + "' has a different dimension");
  };
  check_dim(u, "u");
  if (has_v) {
    Weight v = weight_from_json(j.at("v"), n);
    check_dim(v, "v");
    return WeightPair::from_uv(u, v, e, n);
  }
  Weight w = weight_from_json(j.at("w"), n);
  check_dim(w, "w");
  return WeightPair::from_uw(u, w, e, n);
}

IntegrateOptions integrate_from_json(const Json& j, std::uint64_t seed) {
  IntegrateOptions o;
  o.seed = seed;
  if (!j.is_object()) return o;
  const std::string m = string_or(j, "method", "auto");
  if (m == "auto") o.method = VolumeMethod::Auto;
  else if (m == "exact") o.method = VolumeMethod::Exact;
  else if (m == "monte_carlo") o.method = VolumeMethod::MonteCarlo;
  else bad("unknown method '" + m + "'");
  const double s = number_or(j, "samples", static_cast<double>(o.samples));
  if (s < 0) bad("field 'samples' must be nonnegative");
  o.samples = static_cast<std::uint64_t>(s);
  return o;
}

VerdictThresholds thresholds_from_json(const Json& j) {
  VerdictThresholds t;
  if (!j.is_object()) return t;
  t.slope = number_or(j, "slope", t.slope);
  t.r_squared = number_or(j, "r_squared", t.r_squared);
  t.min_scales = static_cast<std::size_t>(integer_or(j, "min_scales", static_cast<int>(t.min_scales)));
  t.tail_points = static_cast<std::size_t>(integer_or(j, "tail_points", static_cast<int>(t.tail_points)));
  return t;
}

ConditionSampling condition_sampling_from_json(const Json& j, std::uint64_t seed) {
  ConditionSampling s;
  s.seed = seed;
  if (!j.is_object()) return s;
  s.scales = scale_list(j, "scales", "scale_exponents");
  for (double x : s.scales)
    if (!(x > 0.0)) bad("scales must be positive");
  s.samples_per_scale = integer_or(j, "samples_per_scale", s.samples_per_scale);
  if (s.samples_per_scale < 0) bad("samples_per_scale must be nonnegative");
  s.integrate = integrate_from_json(j.value("integrate", Json::object()), seed);
  s.thresholds = thresholds_from_json(j.value("thresholds", Json::object()));
  return s;
}

ComparabilitySampling comparability_sampling_from_json(const Json& j, int dim, std::uint64_t seed) {
  ComparabilitySampling s;
  s.dim = dim;
  s.seed = seed;
  s.integrate.seed = seed;
  if (!j.is_object()) return s;
  s.half_sides = scale_list(j, "half_sides", "half_side_exponents");
  for (double x : s.half_sides)
    if (!(x > 0.0)) bad("half sides must be positive");
  if (j.contains("centers")) {
    const Json& c = j.at("centers");
    if (!c.is_array()) bad("field 'centers' must be an array");
    for (const auto& x : c) {
      auto xs = numbers(x, "centers");
      if (static_cast<int>(xs.size()) != dim) bad("centre dimension differs from 'dim'");
      s.centers.push_back(Eigen::Map<Vec>(xs.data(), dim));
    }
  }
  s.random_centers = integer_or(j, "random_centers", s.random_centers);
  s.include_origin = bool_or(j, "include_origin", s.include_origin);
  const std::string m = string_or(j, "subsets", "both");
  if (m == "corners") s.subsets = SubsetMode::Corners;
  else if (m == "dyadic") s.subsets = SubsetMode::Dyadic;
  else if (m == "both") s.subsets = SubsetMode::Both;
  else bad("unknown subset mode '" + m + "'");
  s.corner_fractions = integer_or(j, "corner_fractions", s.corner_fractions);
  s.dyadic_depth = integer_or(j, "dyadic_depth", s.dyadic_depth);
  s.unions_per_depth = integer_or(j, "unions_per_depth", s.unions_per_depth);
  s.doubling_cap = number_or(j, "doubling_cap", s.doubling_cap);
  s.integrate = integrate_from_json(j.value("integrate", Json::object()), seed);
  s.thresholds = thresholds_from_json(j.value("thresholds", Json::object()));
  return s;
}

AutoGridOptions grid_options_from_json(const Json& j) {
  AutoGridOptions g;
  if (!j.is_object()) return g;
  if (j.contains("fixed")) {
    const Json& f = j.at("fixed");
    if (f.contains("lo")) {
      GridSpec s;
      s.lo = vec_from_json(f, "lo");
      s.hi = vec_from_json(f, "hi", static_cast<int>(s.lo.size()));
      for (double x : numbers(field(f, "shape"), "shape")) s.shape.push_back(static_cast<int>(x));
      if (s.shape.size() != static_cast<std::size_t>(s.lo.size())) bad("grid shape differs from its dimension");
      g.fixed = s;
    } else {
      g.fixed = GridSpec::centred(integer_or(f, "dim", 1), number(f, "half_width"),
                                  integer_or(f, "nodes_per_axis", 1024));
    }
    for (int k : g.fixed->shape)
      if (k < 16) bad("fixed grids need at least 16 nodes per axis");
  }
  g.spacing_factor = number_or(j, "spacing_factor", g.spacing_factor);
  g.initial_half_width = number_or(j, "initial_half_width", g.initial_half_width);
  g.max_nodes_per_axis = integer_or(j, "max_nodes_per_axis", g.max_nodes_per_axis);
  g.max_total_nodes = static_cast<std::size_t>(number_or(j, "max_total_nodes", static_cast<double>(g.max_total_nodes)));
  g.relative_tolerance = number_or(j, "relative_tolerance", g.relative_tolerance);
  g.shell_fraction = number_or(j, "shell_fraction", g.shell_fraction);
  g.alpha_levels = integer_or(j, "alpha_levels", g.alpha_levels);
  if (j.contains("quadrature")) {
    const Json& q = j.at("quadrature");
    g.quadrature.initial_order = integer_or(q, "initial_order", g.quadrature.initial_order);
    g.quadrature.max_order = integer_or(q, "max_order", g.quadrature.max_order);
    g.quadrature.tolerance = number_or(q, "tolerance", g.quadrature.tolerance);
  }
  if (!(g.spacing_factor > 0.0) || g.alpha_levels < 2 || !(g.relative_tolerance > 0.0))
    bad("grid options out of range");
  return g;
}

SearchConfig search_config_from_json(const Json& j, std::uint64_t seed) {
  SearchConfig c;
  c.seed = seed;
  c.integrate.seed = seed;
  if (!j.is_object()) bad("field 'search' must be an object");
  c.dim = integer_or(j, "dim", c.dim);
  c.parameterization = parameterization_from_name(string_or(j, "parameterization", "interval"));
  c.generators = integer_or(j, "generators", c.generators);
  c.log_scale_bound = number_or(j, "log_scale_bound", c.log_scale_bound);
  c.translation_bound = number_or(j, "translation_bound", c.translation_bound);
  c.vary_mu = bool_or(j, "vary_mu", c.vary_mu);
  c.vary_tau = bool_or(j, "vary_tau", c.vary_tau);
  c.optimizer = optimizer_from_name(string_or(j, "optimizer", "annealing"));
  c.steps = integer_or(j, "steps", c.steps);
  c.restarts = integer_or(j, "restarts", c.restarts);
  c.step_size = number_or(j, "step_size", c.step_size);
  c.step_decay = number_or(j, "step_decay", c.step_decay);
  c.cooling = number_or(j, "cooling", c.cooling);
  c.probes = integer_or(j, "probes", c.probes);
  c.integrate = integrate_from_json(j.value("integrate", Json::object()), seed);
  if (c.steps < 100) bad("search needs at least 100 steps");
  if (c.generators < c.dim) bad("need k >= n generators");
  return c;
}

Json to_json(const Configuration& c) {
  return {{"body", to_json(c.body)}, {"mu", to_json(c.mu)}, {"tau", to_json(c.tau)}};
}

Json to_json(const TrendFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"points", f.points}};
}

Json to_json(const TrendAssessment& a) {
  return {{"full", to_json(a.full)},
          {"lower", to_json(a.lower)},
          {"upper", to_json(a.upper)},
          {"verdict", verdict_name(a.verdict)},
          {"growth_slope", a.growth_slope}};
}

Json to_json(const ConditionReport& r) {
  Json trends = Json::array();
  for (const auto& t : r.trends) {
    Json pts = Json::array();
    for (const auto& p : t.points) pts.push_back({{"scale", p.scale}, {"value", p.value}, {"body_scale", p.body_scale}});
    Json tj{{"name", t.name}, {"points", pts}};
    if (t.assessment) tj["assessment"] = to_json(*t.assessment);
    trends.push_back(tj);
  }
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"body_scale", row.body_scale},
                    {"first", to_json(row.first)},
                    {"second", to_json(row.second)},
                    {"polar_volume_ratio", row.polar_volume_ratio}});
  Json j{{"condition", r.condition},
         {"family", family_name(r.family)},
         {"sup", to_json(r.sup)},
         {"witness_product", r.witness_product},
         {"trends", trends},
         {"verdict", verdict_name(r.verdict)},
         {"slope", r.slope},
         {"r_squared", r.r_squared},
         {"growth_slope", r.growth_slope},
         {"configurations", r.configurations},
         {"sqrt_n_ratio_u", pairs_json(r.sqrt_n_ratio_u)},
         {"sqrt_n_ratio_w", pairs_json(r.sqrt_n_ratio_w)},
         {"rows", rows},
         {"warnings", r.warnings}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

Json to_json(const ComparabilityReport& r) {
  Json j{{"c_estimate", r.c_estimate},
         {"delta", r.delta},
         {"witness_center", to_json(r.witness_center)},
         {"witness_half_side", r.witness_half_side},
         {"witness_subset", r.witness_subset},
         {"witness_mu1_ratio", r.witness_mu1_ratio},
         {"witness_mu2_ratio", r.witness_mu2_ratio},
         {"per_scale", pairs_json(r.per_scale)},
         {"mu1_doubling", r.mu1_doubling},
         {"mu2_doubling", r.mu2_doubling},
         {"subsets", r.subsets},
         {"warnings", r.warnings}};
  if (r.assessment) j["assessment"] = to_json(*r.assessment);
  return j;
}

Json to_json(const ReverseHolderReport& r) {
  return {{"c_estimate", std::isfinite(r.c_estimate) ? Json(r.c_estimate) : Json("inf")},
          {"diverged", r.diverged},
          {"divergence", r.divergence},
          {"witness_center", to_json(r.witness_center)},
          {"witness_half_side", r.witness_half_side},
          {"per_scale", pairs_json(r.per_scale)}};
}

Json to_json(const RegionSpec& r) {
  return {{"case", r.which == RegionCase::A ? "a" : "b"},
          {"p0", r.p0},
          {"q0", r.q0},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"center", {r.center_x, r.center_y}},
          {"radius", r.radius},
          {"center_on_line", r.center_on_line},
          {"nonempty", r.nonempty},
          {"x_interval", {r.x_lo, r.x_hi}},
          {"y_interval", {r.y_lo, r.y_hi}},
          {"center_interior", r.center_interior},
          {"degenerate", r.degenerate}};
}

Json to_json(const SufficiencyReport& r) {
  return {{"applicable", r.applicable},
          {"case", r.which == RegionCase::A ? "a" : "b"},
          {"delta", r.delta},
          {"side_condition", r.side_condition},
          {"condition_bounded", r.condition_bounded},
          {"comparability_bounded", r.comparability_bounded},
          {"comparability_cap", r.comparability_cap},
          {"condition", to_json(r.condition)},
          {"comparability", to_json(r.comparability)},
          {"reasons", r.reasons}};
}

Json to_json(const GridSpec& g) { return {{"lo", to_json(g.lo)}, {"hi", to_json(g.hi)}, {"shape", g.shape}}; }

Json to_json(const GridFunction& g) {
  std::vector<double> re, im;
  re.reserve(g.values.size());
  im.reserve(g.values.size());
  for (const auto& z : g.values) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"grid", to_json(g.grid)}, {"real", re}, {"imag", im}};
}

Json to_json(const LowerBoundReport& r) {
  return {{"min_ratio", r.min_ratio},
          {"argmin", to_json(r.argmin)},
          {"samples", r.samples},
          {"volume", r.volume},
          {"passed", r.passed}};
}

Json to_json(const LevelSetReport& r) {
  return {{"alphas", r.alphas},
          {"measures", r.measures},
          {"sup_quantity", r.sup_quantity},
          {"sup_alpha", r.sup_alpha},
          {"sup_refined", r.sup_refined},
          {"sup_refined_alpha", r.sup_refined_alpha},
          {"l1_norm", r.l1_norm},
          {"v_measure", to_json(r.v_measure)},
          {"ratio", r.ratio},
          {"shell_fraction", r.shell_fraction},
          {"grid", to_json(r.grid)}};
}

Json to_json(const StrongTypeReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"label", x.label},
                    {"numerator", x.numerator},
                    {"denominator", x.denominator},
                    {"ratio", x.ratio},
                    {"grid", to_json(x.grid)}});
  return {{"max_ratio", r.max_ratio}, {"rows", rows}};
}

Json to_json(const HausdorffYoungReport& r) {
  return {{"lhs", r.lhs}, {"rhs_without_constant", r.rhs_without_constant}, {"ratio", r.ratio}, {"grid", to_json(r.grid)}};
}

Json to_json(const SearchReport& r) {
  Json traj = Json::array();
  for (const auto& t : r.trajectory) traj.push_back({t.step, t.value});
  Json j{{"direction", r.direction},
         {"best_value", r.best_value},
         {"best_estimate", to_json(r.best_estimate)},
         {"best_parameters", r.best_parameters},
         {"trajectory", traj},
         {"lower_bound_evidence", r.lower_bound_evidence},
         {"upper_bound_evidence", r.upper_bound_evidence},
         {"evaluations", r.evaluations},
         {"failed_evaluations", r.failed_evaluations},
         {"initial_temperature", r.initial_temperature},
         {"notes", r.notes}};
  if (r.best_config) j["best_config"] = to_json(*r.best_config);
  return j;
}

Json to_json(const JohnResult& r) {
  return {{"inner", to_json(r.inner)},
          {"outer", to_json(r.outer)},
          {"factor", r.factor},
          {"iterations", r.iterations},
          {"verified", r.verified}};
}

}  // namespace polarity
