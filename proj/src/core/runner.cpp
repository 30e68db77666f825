#include "polarity/runner.hpp"

#include <cctype>
#include <cmath>

#include "polarity/errors.hpp"
#include "polarity/random.hpp"

namespace polarity {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ConfigInvalid, what); }

const Json& need(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

Json optional_block(const Json& j, const char* name) { return j.contains(name) ? j.at(name) : Json::object(); }

int need_dim(const Json& j) {
  const Json& d = need(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) bad("field 'dim' must be a positive integer");
  return d.get<int>();
}

double need_number(const Json& j, const char* name) {
  const Json& v = need(j, name);
  if (!v.is_number() || !std::isfinite(v.get<double>())) bad(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_list(const Json& j, const char* name) {
  const Json& v = need(j, name);
  if (!v.is_array() || v.empty()) bad(std::string("field '") + name + "' must be a nonempty array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(std::string("field '") + name + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::uint64_t derived(std::uint64_t seed, std::uint64_t tag) { return Rng::substream(seed, {tag}).next(); }

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

std::vector<CsvTable> trend_tables(const ConditionReport& r, const std::string& prefix) {
  std::vector<CsvTable> out;
  for (const auto& t : r.trends) {
    CsvTable c{prefix + "_" + slug(t.name) + ".csv", {"scale", "value"}, {}};
    for (const auto& p : t.points) c.rows.push_back({p.scale, p.value});
    out.push_back(std::move(c));
  }
  return out;
}

Json pair_summary(const WeightPair& p) {
  return {{"dim", p.dim}, {"u", to_json(p.u)}, {"v", to_json(p.v)}, {"w", to_json(p.w)}, {"warnings", p.warnings}};
}

RegionCase case_from(const Json& j) {
  const std::string c = j.is_string() ? j.get<std::string>() : "";
  if (c == "a" || c == "A") return RegionCase::A;
  if (c == "b" || c == "B") return RegionCase::B;
  bad("field 'case' must be \"a\" or \"b\"");
}

using Builder = std::function<std::function<RunOutput()>(const Json&, std::uint64_t)>;

std::function<RunOutput()> build_polar(const Json& c, std::uint64_t seed) {
  TranslatedBody body = region_from_json(need(c, "body"));
  IntegrateOptions io = integrate_from_json(optional_block(c, "volume"), seed);
  return [=] {
    Body p = polar(body);
    IntegrateOptions a = io, b = io;
    a.seed = derived(io.seed, 1);
    b.seed = derived(io.seed, 2);
    RunOutput out;
    out.report = {{"input", to_json(body)},
                  {"polar", to_json(p)},
                  {"volume", to_json(volume(body, a))},
                  {"polar_volume", to_json(volume(p, b))}};
    out.documents.emplace_back("polar.json", to_json(p));
    return out;
  };
}

std::function<RunOutput()> build_mahler(const Json& c, std::uint64_t seed) {
  Body body = body_from_json(need(c, "body"));
  IntegrateOptions io = integrate_from_json(optional_block(c, "volume"), seed);
  return [=] {
    RunOutput out;
    out.report = {{"body", to_json(body)}, {"mahler_volume", to_json(mahler_volume(body, io))}};
    return out;
  };
}

std::function<RunOutput()> build_condition(const Json& c, std::uint64_t seed, bool nq) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  WeightPair pair = pair_from_json(need(c, "pair"), e);
  Family family = nq ? Family::Cubes : family_from_name(c.value("family", std::string("cubes")));
  ConditionSampling s = condition_sampling_from_json(optional_block(c, "sampling"), seed);
  return [=] {
    ConditionReport r = nq ? check_nq_prime(pair, e, s) : check_condition(pair, e, family, s);
    RunOutput out;
    out.report = to_json(r);
    out.report["pair"] = pair_summary(pair);
    out.tables = trend_tables(r, nq ? "nqprime" : "condition");
    return out;
  };
}

std::function<RunOutput()> build_comparability(const Json& c, std::uint64_t seed) {
  const int n = need_dim(c);
  Weight mu1 = weight_from_json(need(c, "mu1"), n);
  Weight mu2 = weight_from_json(need(c, "mu2"), n);
  const double delta = need_number(c, "delta");
  if (!(delta > 0.0)) bad("delta must be positive");
  ComparabilitySampling s = comparability_sampling_from_json(optional_block(c, "sampling"), n, seed);
  return [=] {
    ComparabilityReport r = check_comparability(mu1, mu2, delta, s);
    RunOutput out;
    out.report = to_json(r);
    CsvTable t{"comparability.csv", {"half_side", "c"}, {}};
    for (const auto& [h, v] : r.per_scale) t.rows.push_back({h, v});
    out.tables.push_back(std::move(t));
    return out;
  };
}

std::function<RunOutput()> build_epsilon_map(const Json& c, std::uint64_t) {
  const int n = need_dim(c);
  const double cc = need_number(c, "c");
  std::vector<double> deltas = number_list(c, "deltas");
  for (double d : deltas) epsilon_of_delta(d, cc, n);  // validates every entry
  return [=] {
    RunOutput out;
    CsvTable t{"epsilon.csv", {"delta", "epsilon"}, {}};
    Json rows = Json::array();
    for (double d : deltas) {
      const double eps = epsilon_of_delta(d, cc, n);
      t.rows.push_back({d, eps});
      rows.push_back({{"delta", d}, {"epsilon", eps}, {"method", "exact"}, {"abs_error", 0.0}});
    }
    out.report = {{"c", cc}, {"dim", n}, {"rows", rows}};
    out.tables.push_back(std::move(t));
    return out;
  };
}

std::function<RunOutput()> build_region(const Json& c, std::uint64_t) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  RegionCase which = case_from(need(c, "case"));
  const double radius = c.value("radius", 0.05);
  if (!(radius > 0.0)) bad("radius must be positive");
  return [=] {
    RunOutput out;
    out.report = to_json(inherited_region(e, which, radius));
    return out;
  };
}

std::function<RunOutput()> build_classify(const Json& c, std::uint64_t seed) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  WeightPair pair = pair_from_json(need(c, "pair"), e);
  ConditionSampling cs = condition_sampling_from_json(optional_block(c, "condition_sampling"), derived(seed, 1));
  ComparabilitySampling ks =
      comparability_sampling_from_json(optional_block(c, "comparability_sampling"), pair.dim, derived(seed, 2));
  return [=] {
    SufficiencyReport r = classify_sufficiency(pair, e, cs, ks);
    RunOutput out;
    out.report = to_json(r);
    out.report["pair"] = pair_summary(pair);
    out.tables = trend_tables(r.condition, "condition");
    return out;
  };
}

QuadratureOptions quadrature_from(const Json& c) {
  Json g = Json::object();
  if (c.contains("quadrature")) g["quadrature"] = c.at("quadrature");
  return grid_options_from_json(g).quadrature;
}

std::function<RunOutput()> build_lower_bound(const Json& c, std::uint64_t seed) {
  TranslatedBody body = region_from_json(need(c, "body"));
  const int samples = c.value("samples", 1000);
  if (samples < 1) bad("samples must be positive");
  QuadratureOptions q = quadrature_from(c);
  return [=] {
    RunOutput out;
    out.report = to_json(lower_bound_check(body, static_cast<std::size_t>(samples), seed, q));
    return out;
  };
}

std::function<RunOutput()> build_rwt(const Json& c, std::uint64_t seed) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  WeightPair pair = pair_from_json(need(c, "pair"), e);
  TranslatedBody set = region_from_json(need(c, "set"));
  if (set.dim() != pair.dim) fail(ErrorCode::DimensionMismatch, "set dimension differs from the pair");
  AutoGridOptions g = grid_options_from_json(optional_block(c, "grid"));
  IntegrateOptions io = integrate_from_json(optional_block(c, "integrate"), seed);
  std::vector<double> dilations = c.contains("dilations") ? number_list(c, "dilations") : std::vector<double>{1.0};
  for (double d : dilations)
    if (!(d > 0.0)) bad("dilations must be positive");
  return [=] {
    RunOutput out;
    CsvTable t{"rwt.csv", {"dilation", "ratio", "sup_refined", "v_measure"}, {}};
    CsvTable levels{"level_sets.csv", {"alpha", "measure"}, {}};
    Json rows = Json::array();
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < dilations.size(); ++i) {
      IntegrateOptions o = io;
      o.seed = derived(io.seed, i);
      LevelSetReport r = restricted_weak_type(pair, e, scaled(set, dilations[i]), g, o);
      t.rows.push_back({dilations[i], r.ratio, r.sup_refined, r.v_measure.value});
      if (i == 0)
        for (std::size_t k = 0; k < r.alphas.size(); ++k) levels.rows.push_back({r.alphas[k], r.measures[k]});
      Json rj = to_json(r);
      rj["dilation"] = dilations[i];
      rows.push_back(rj);
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    out.report = {{"rows", rows}, {"min_ratio", lo}, {"max_ratio", hi}, {"relative_spread", hi > 0 ? (hi - lo) / hi : 0.0}};
    out.tables.push_back(std::move(t));
    out.tables.push_back(std::move(levels));
    return out;
  };
}

std::function<RunOutput()> build_strong_type(const Json& c, std::uint64_t seed) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  WeightPair pair = pair_from_json(need(c, "pair"), e);
  const Json& fj = need(c, "functions");
  if (!fj.is_array() || fj.empty()) bad("field 'functions' must be a nonempty array");
  std::vector<SimpleFunction> fs;
  for (const auto& x : fj) {
    fs.push_back(simple_function_from_json(x));
    if (fs.back().dim() != pair.dim) fail(ErrorCode::DimensionMismatch, "function dimension differs from the pair");
  }
  AutoGridOptions g = grid_options_from_json(optional_block(c, "grid"));
  IntegrateOptions io = integrate_from_json(optional_block(c, "integrate"), seed);
  return [=] {
    StrongTypeReport r = strong_type_ratio(pair, e, fs, g, io);
    RunOutput out;
    out.report = to_json(r);
    CsvTable t{"strong_type.csv", {"index", "numerator", "denominator", "ratio"}, {}};
    for (std::size_t i = 0; i < r.rows.size(); ++i)
      t.rows.push_back({static_cast<double>(i), r.rows[i].numerator, r.rows[i].denominator, r.rows[i].ratio});
    out.tables.push_back(std::move(t));
    return out;
  };
}

std::function<RunOutput()> build_hy(const Json& c, std::uint64_t) {
  SimpleFunction f = simple_function_from_json(need(c, "function"));
  const double p = need_number(c, "p");
  if (!(p > 1.0 && p <= 2.0)) fail(ErrorCode::ConfigInvalid, "p must lie in (1, 2]");
  AutoGridOptions g = grid_options_from_json(optional_block(c, "grid"));
  return [=] {
    RunOutput out;
    out.report = to_json(hausdorff_young_check(f, p, g));
    return out;
  };
}

std::function<RunOutput()> build_conjecture(const Json& c, std::uint64_t seed) {
  Exponents e = exponents_from_json(need(c, "exponents"));
  WeightPair pair = pair_from_json(need(c, "pair"), e);
  SearchConfig s = search_config_from_json(need(c, "search"), seed);
  if (s.dim != pair.dim) fail(ErrorCode::DimensionMismatch, "search dimension differs from the pair");
  std::optional<Body> ray_body;
  Vec mu, tau;
  std::vector<double> scales;
  if (c.contains("dilation_ray")) {
    const Json& r = c.at("dilation_ray");
    ray_body = body_from_json(need(r, "body"));
    if (ray_body->dim() != pair.dim) fail(ErrorCode::DimensionMismatch, "ray body dimension differs from the pair");
    mu = r.contains("mu") ? vec_from_json(r, "mu", pair.dim) : Vec::Zero(pair.dim);
    tau = r.contains("tau") ? vec_from_json(r, "tau", pair.dim) : Vec::Zero(pair.dim);
    if (r.contains("scales")) {
      scales = number_list(r, "scales");
    } else {
      auto ex = number_list(r, "scale_exponents");
      if (ex.size() != 2 || ex[0] > ex[1]) bad("scale_exponents must be [lo, hi]");
      scales = ConditionSampling::dyadic_scales(static_cast<int>(ex[0]), static_cast<int>(ex[1]));
    }
  }
  return [=] {
    SearchReport r = conjecture_sup_search(pair, e, s);
    RunOutput out;
    out.report = to_json(r);
    CsvTable t{"trajectory.csv", {"step", "value"}, {}};
    for (const auto& p : r.trajectory) t.rows.push_back({static_cast<double>(p.step), p.value});
    out.tables.push_back(std::move(t));
    if (r.best_config) out.documents.emplace_back("witness.json", to_json(r.best_config->body));
    if (ray_body) {
      IntegrateOptions io = s.integrate;
      io.seed = derived(seed, 0xD1);
      auto ray = dilation_ray(pair, e, *ray_body, mu, tau, scales, io);
      CsvTable d{"dilation.csv", {"scale", "value", "u_part", "w_part"}, {}};
      Json pts = Json::array();
      for (const auto& p : ray) {
        d.rows.push_back({p.scale, p.value, p.u_part, p.w_part});
        pts.push_back({{"scale", p.scale}, {"value", p.value}, {"u_part", p.u_part}, {"w_part", p.w_part}});
      }
      out.report["dilation_ray"] = pts;
      out.tables.push_back(std::move(d));
    }
    return out;
  };
}

std::function<RunOutput()> build_mahler_search(const Json& c, std::uint64_t seed) {
  SearchConfig s = search_config_from_json(need(c, "search"), seed);
  const std::string dir = c.value("direction", std::string("min"));
  if (dir != "min" && dir != "max") bad("direction must be \"min\" or \"max\"");
  return [=] {
    SearchReport r = mahler_search(s, dir == "min");
    RunOutput out;
    out.report = to_json(r);
    CsvTable t{"trajectory.csv", {"step", "value"}, {}};
    for (const auto& p : r.trajectory) t.rows.push_back({static_cast<double>(p.step), p.value});
    out.tables.push_back(std::move(t));
    if (r.best_config) out.documents.emplace_back("witness.json", to_json(r.best_config->body));
    return out;
  };
}

const std::vector<std::pair<std::string, Builder>>& builders() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"polar", build_polar},
      {"mahler", build_mahler},
      {"check-condition", [](const Json& c, std::uint64_t s) { return build_condition(c, s, false); }},
      {"check-nqprime", [](const Json& c, std::uint64_t s) { return build_condition(c, s, true); }},
      {"comparability", build_comparability},
      {"epsilon-map", build_epsilon_map},
      {"region", build_region},
      {"classify", build_classify},
      {"lower-bound", build_lower_bound},
      {"rwt", build_rwt},
      {"strong-type", build_strong_type},
      {"hy", build_hy},
      {"conjecture", build_conjecture},
      {"mahler-search", build_mahler_search},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, b] : builders()) v.push_back(n);
    return v;
  }();
  return names;
}

Json tolerance_table() {
  return {{"membership_slack", kMembershipSlack},
          {"orthogonality", kOrthogonalityTol},
          {"monte_carlo_sigmas", 3},
          {"min_monte_carlo_samples", kMinMonteCarloSamples},
          {"default_volume_samples", VolumeOptions{}.samples},
          {"john_tolerance", 1e-3},
          {"quadrature_tolerance", QuadratureOptions{}.tolerance},
          {"quadrature_max_order", QuadratureOptions{}.max_order},
          {"grid_relative_tolerance", AutoGridOptions{}.relative_tolerance},
          {"grid_shell_fraction", AutoGridOptions{}.shell_fraction},
          {"trend_slope", VerdictThresholds{}.slope},
          {"trend_r_squared", VerdictThresholds{}.r_squared},
          {"trend_min_scales", VerdictThresholds{}.min_scales},
          {"comparability_cap", SufficiencyReport{}.comparability_cap},
          {"reproduce_relative", 1e-9},
          {"reproduce_absolute", 1e-12}};
}

PreparedRun prepare_run(const std::string& command, const Json& config, std::optional<std::uint64_t> seed_override) {
  try {
    if (!config.is_object()) bad("config must be a JSON object");
    if (config.contains("schema_version")) {
      const Json& v = config.at("schema_version");
      if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) bad("unsupported schema_version");
    }
    PreparedRun run;
    run.command = command;
    if (seed_override) {
      run.seed = *seed_override;
    } else {
      const Json& s = need(config, "seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
        bad("field 'seed' must be a nonnegative 64-bit integer");
      run.seed = s.get<std::uint64_t>();
    }
    for (const auto& [name, build] : builders()) {
      if (name == command) {
        run.execute = build(config, run.seed);
        return run;
      }
    }
    bad("unknown command '" + command + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    fail(ErrorCode::ConfigInvalid, std::string(error_name(e.code())) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigInvalid, e.what());
  }
}

Json output_to_json(const PreparedRun& run, const RunOutput& out) {
  Json tables = Json::array();
  for (const auto& t : out.tables) tables.push_back({{"name", t.name}, {"header", t.header}, {"rows", t.rows}});
  Json docs = Json::object();
  for (const auto& [name, doc] : out.documents) docs[name] = doc;
  return {{"schema_version", kSchemaVersion},
          {"command", run.command},
          {"seed", run.seed},
          {"report", out.report},
          {"tables", tables},
          {"documents", docs}};
}

}  // namespace polarity
