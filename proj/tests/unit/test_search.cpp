#include <doctest.h>

#include "../support/oracles.hpp"
#include "polarity/errors.hpp"
#include "polarity/search.hpp"

using namespace polarity;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

WeightPair lebesgue(const Exponents& e, int n = 1) {
  return WeightPair::from_uw(Weight::constant(1.0), Weight::constant(1.0), e, n);
}

bool monotone(const SearchReport& r) {
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    const double a = r.trajectory[i - 1].value, b = r.trajectory[i].value;
    if (r.direction == "max" ? b < a : b > a) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("Lebesgue intervals reach the Mahler bound") {
    const Exponents e = Exponents::make(2.0, 2.0);
    for (Optimizer o : {Optimizer::Annealing, Optimizer::MultiStart}) {
      SearchConfig c;
      c.optimizer = o;
      c.seed = 21;
      SearchReport r = conjecture_sup_search(lebesgue(e), e, c);
      CHECK(r.best_value == doctest::Approx(2.0).epsilon(0.01));
      CHECK(r.best_value <= 2.0 + 1e-12);
      CHECK(monotone(r));
      CHECK(r.trajectory.back().value == doctest::Approx(r.best_value));
      REQUIRE(r.best_config);
      CHECK(contains(r.best_config->body, Vec(-r.best_config->mu)));
    }
  }

  TEST_CASE("functional for an off-centre interval") {
    const Exponents e = Exponents::make(2.0, 2.0);
    // E = [-1, 1], mu = 0.5: |E + mu| = 2, polar of [-0.5, 1.5] has length 4/3.
    Configuration c{TranslatedBody(Body::cube(1, 1.0)), v1(0.5), v1(0.0)};
    CHECK(conjecture_functional(lebesgue(e), e, c).value == doctest::Approx(std::sqrt(8.0 / 3.0)));
  }

  TEST_CASE("pure dilations are flat for Lebesgue weights when p' = q") {
    const Exponents e = Exponents::make(2.0, 2.0);
    std::vector<double> scales;
    for (int k = -6; k <= 6; ++k) scales.push_back(std::ldexp(1.0, k));
    for (const auto& p : dilation_ray(lebesgue(e, 2), e, Body::cube(2, 1.0), Vec::Zero(2), Vec::Zero(2), scales))
      CHECK(p.value == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  }

  TEST_CASE("translating the weights leaves the functional unchanged") {
    const Exponents e = Exponents::make(2.0, 4.0);
    const Weight u = Weight::power(0.5, 1), w = Weight::power(-0.5, 1);
    const Vec t = v1(0.8);
    WeightPair moved = WeightPair::from_uw(Weight::translated(t, u), Weight::translated(t, w), e, 1);
    Configuration c{TranslatedBody(Body::cube(1, 0.7)), v1(0.2), v1(-0.3)};
    // u(. + t) over E + mu equals u over E + mu + t; same for w and the polar.
    Configuration shifted{TranslatedBody(Body::cube(1, 0.7)), v1(0.2), Vec(v1(-0.3) + t)};
    const double a = conjecture_functional(moved, e, c).value;
    const double ua = std::pow(integrate(u, translate(translate(c.body, c.mu), t)).value, 1.0 / e.q);
    const double wa = std::pow(integrate(w, translated_polar(shifted.body, shifted.mu, shifted.tau)).value, 1.0 / e.p_conj);
    CHECK(a == doctest::Approx(ua * wa).epsilon(1e-12));
  }

  TEST_CASE("seeded reruns are bitwise identical") {
    const Exponents e = Exponents::make(2.0, 4.0);
    WeightPair pair = WeightPair::from_uv(Weight::constant(1.0), Weight::power(0.5, 1), e, 1);
    SearchConfig c;
    c.steps = 200;
    c.seed = 5;
    SearchReport a = conjecture_sup_search(pair, e, c), b = conjecture_sup_search(pair, e, c);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) CHECK(a.trajectory[i].value == b.trajectory[i].value);
    CHECK(a.best_parameters == b.best_parameters);
  }

  TEST_CASE("power pair search is stable across seeds and budgets") {
    const Exponents e = Exponents::make(2.0, 4.0);
    WeightPair pair = WeightPair::from_uv(Weight::constant(1.0), Weight::power(0.5, 1), e, 1);
    std::vector<double> best;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (int steps : {300, 600}) {
        SearchConfig c;
        c.seed = seed;
        c.steps = steps;
        best.push_back(conjecture_sup_search(pair, e, c).best_value);
      }
    }
    const auto [lo, hi] = std::minmax_element(best.begin(), best.end());
    CHECK((*hi - *lo) / *hi < 0.05);
  }

  TEST_CASE("Gaussian weights decay along a dilation ray") {
    const Exponents e = Exponents::make(2.0, 2.0);
    Weight g = Weight::grid_from(v1(-8.0), v1(8.0), {321}, [](const Vec& x) { return std::exp(-0.5 * x.squaredNorm()); });
    WeightPair pair = WeightPair::from_uw(g, g, e, 1);
    std::vector<double> scales;
    for (int k = 0; k <= 10; ++k) scales.push_back(std::ldexp(1.0, k));
    auto ray = dilation_ray(pair, e, Body::cube(1, 1.0), Vec::Zero(1), Vec::Zero(1), scales);
    for (std::size_t i = 4; i < ray.size(); ++i) {
      CHECK(ray[i].value < ray[i - 1].value);
      CHECK(ray[i].w_part < ray[i - 1].w_part);
      CHECK(ray[i].u_part >= ray[i - 1].u_part * (1 - 1e-12));
    }
    CHECK(global_integrability(g) == "integrable");
    CHECK(global_integrability(Weight::constant(1.0)) == "not integrable");
  }

  TEST_CASE("Mahler extremes over polygons and ellipses") {
    SearchConfig c;
    c.dim = 2;
    c.parameterization = Parameterization::SymPolygon;
    c.generators = 4;
    c.steps = 300;
    c.seed = 8;
    SearchReport lo = mahler_search(c, true);
    CHECK(lo.best_value >= 8.0 - 1e-9);
    CHECK(lo.best_value == doctest::Approx(8.0).epsilon(0.02));
    CHECK(lo.lower_bound_evidence);
    CHECK(monotone(lo));

    SearchConfig el = c;
    el.parameterization = Parameterization::Ellipsoid;
    el.steps = 100;
    SearchReport hi = mahler_search(el, false);
    CHECK(hi.best_value == doctest::Approx(oracle::kPi * oracle::kPi).epsilon(0.01));

    SearchConfig one;
    one.steps = 100;
    SearchReport flat = mahler_search(one, false);
    for (const auto& p : flat.trajectory) CHECK(p.value == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("config validation") {
    const Exponents e = Exponents::make(2.0, 2.0);
    SearchConfig c;
    c.steps = 50;
    CHECK(code_of([&] { conjecture_sup_search(lebesgue(e), e, c); }) == ErrorCode::ConfigInvalid);
    SearchConfig k;
    k.dim = 2;
    k.parameterization = Parameterization::SymPolygon;
    k.generators = 1;
    CHECK(code_of([&] { mahler_search(k, true); }) == ErrorCode::ConfigInvalid);
    WeightPair bad = WeightPair::from_uw(Weight::constant(1.0), Weight::pow(Weight::power(-0.5, 1), 3.0), e, 1);
    SearchConfig ok;
    CHECK(code_of([&] { conjecture_sup_search(bad, e, ok); }) == ErrorCode::NotLocallyIntegrable);
  }
}
