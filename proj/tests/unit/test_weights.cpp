#include <doctest.h>

#include "../support/oracles.hpp"
#include "polarity/errors.hpp"
#include "polarity/weights.hpp"

using namespace polarity;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec r(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) r(i++) = x;
  return r;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

VolumeOptions monte_carlo(std::uint64_t samples, std::uint64_t seed) {
  VolumeOptions o;
  o.method = VolumeMethod::MonteCarlo;
  o.samples = samples;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("conjugate exponents") {
    CHECK(conjugate(2.0) == 2.0);
    CHECK(conjugate(4.0) == doctest::Approx(4.0 / 3.0));
    CHECK(conjugate(1.5) == doctest::Approx(3.0));
    CHECK(code_of([] { conjugate(1.0); }) == ErrorCode::ExponentOutOfRange);
    Exponents e = Exponents::make(2.0, 4.0);
    CHECK(e.s == 4.0);
    CHECK(e.swapped().p == doctest::Approx(4.0 / 3.0));
    CHECK(e.swapped().q == doctest::Approx(2.0));
  }

  TEST_CASE("dual weights") {
    Exponents e = Exponents::make(2.0, 4.0);
    DualWeight c = dual_weight(Weight::constant(1.0), e);
    CHECK(c.w.kind() == Weight::Kind::Constant);
    CHECK(c.w.constant_value() == 1.0);
    DualWeight d = dual_weight(Weight::power(0.5, 1), e);
    REQUIRE(d.w.kind() == Weight::Kind::Power);
    CHECK(d.w.alpha() == doctest::Approx(-0.5));
    DualWeight f = dual_weight(Weight::power(1.0, 1), Exponents::make(3.0, 3.0));
    CHECK(f.w.alpha() == doctest::Approx(-0.5));
    CHECK(f.locally_integrable);
    DualWeight bad = dual_weight(Weight::power(2.0, 1), e);
    CHECK_FALSE(bad.locally_integrable);
    CHECK(bad.warning.find("NotLocallyIntegrable") != std::string::npos);
    CHECK(code_of([&] { dual_weight(Weight::constant(0.0), e); }) == ErrorCode::ZeroWeight);
  }

  TEST_CASE("construction checks integrability") {
    CHECK(code_of([] { Weight::power(-1.0, 1); }) == ErrorCode::NotLocallyIntegrable);
    CHECK(code_of([] { Weight::aniso(v({-1.0, 0.5})); }) == ErrorCode::NotLocallyIntegrable);
    CHECK(Weight::power(-1.5, 2).locally_integrable());
  }

  TEST_CASE("evaluation and simplification") {
    Weight p = Weight::power(0.5, 1);
    CHECK(p(v({4.0})) == doctest::Approx(2.0));
    Weight prod = Weight::product({p, Weight::power(0.5, 1), Weight::constant(3.0)});
    CHECK(prod(v({4.0})) == doctest::Approx(12.0));
    Weight sq = Weight::pow(p, 2.0);
    CHECK(sq.kind() == Weight::Kind::Power);
    CHECK(sq.alpha() == doctest::Approx(1.0));
    Weight t = Weight::translated(v({1.0}), p);
    CHECK(t(v({3.0})) == doctest::Approx(2.0));
    Weight a = Weight::aniso(v({1.0, 2.0}));
    CHECK(a(v({2.0, 3.0})) == doctest::Approx(18.0));
  }

  TEST_CASE("grid weights interpolate") {
    Weight g = Weight::grid(v({0.0}), v({2.0}), {3}, {0.0, 1.0, 4.0});
    CHECK(g(v({0.5})) == doctest::Approx(0.5));
    CHECK(g(v({1.5})) == doctest::Approx(2.5));
    CHECK(g(v({3.0})) == 0.0);
    // Piecewise linear integral by the trapezoid rule.
    CHECK(integrate(g, Body::box(v({1.0}), v({1.0}))).value == doctest::Approx(0.5 + 2.5));
  }

  TEST_CASE("closed-form integrals") {
    CHECK(integrate(Weight::constant(1.0), Body::cube(1, 1.0)).value == 2.0);
    Estimate disk = integrate(Weight::power(-1.0, 2), Body::ball(2, 1.0));
    CHECK(disk.is_exact());
    CHECK(disk.value == doctest::Approx(2.0 * oracle::kPi));
    Estimate root = integrate(Weight::power(-0.5, 1), Body::cube(1, 1.0));
    CHECK(root.value == doctest::Approx(4.0));
  }

  TEST_CASE("power integral matches a midpoint oracle") {
    for (double alpha : {-0.5, 0.5, 1.0, 2.5}) {
      for (auto [a, b] : {std::pair{0.5, 3.0}, std::pair{-2.0, -0.25}, std::pair{1.0, 1.5}}) {
        const double ref = oracle::midpoint([alpha](double t) { return std::pow(std::abs(t), alpha); }, a, b, 200000);
        CHECK(power_integral_1d(alpha, a, b) == doctest::Approx(ref).epsilon(1e-8));
      }
    }
    CHECK(code_of([] { power_integral_1d(-1.0, -1.0, 1.0); }) == ErrorCode::NonIntegrableSingularity);
  }

  TEST_CASE("Monte Carlo integrals agree with closed forms") {
    Estimate root = integrate(Weight::power(-0.5, 1), Body::cube(1, 1.0), monte_carlo(200000, 3));
    CHECK(root.method == Method::MonteCarlo);
    CHECK(std::abs(root.value - 4.0) <= 0.01 * 4.0);
    Estimate disk = integrate(Weight::power(-1.0, 2), Body::ball(2, 1.0), monte_carlo(200000, 4));
    CHECK(std::abs(disk.value - 2.0 * oracle::kPi) <= std::max(disk.abs_error, 0.01 * 2.0 * oracle::kPi));
    // Off-centre region in 2D against a polar-coordinates free oracle.
    Weight x2 = Weight::aniso(v({2.0, 0.0}));
    Estimate box = integrate(x2, Body::box(v({1.0, 0.0}), v({1.0, 1.0})), monte_carlo(400000, 5));
    CHECK(std::abs(box.value - 16.0 / 3.0) <= box.abs_error + 1e-12);
  }

  TEST_CASE("translation property for integrals") {
    Weight u = Weight::power(-0.5, 1);
    Weight ut = Weight::translated(v({0.75}), u);
    TranslatedBody e = translate(Body::cube(1, 1.0), v({0.3}));
    TranslatedBody moved = translate(e, v({0.75}));
    CHECK(integrate(ut, e).value == doctest::Approx(integrate(u, moved).value).epsilon(1e-12));
  }

  TEST_CASE("doubling") {
    DoublingOptions o;
    o.dim = 2;
    DoublingReport lebesgue = is_doubling(Weight::constant(1.0), 4.0, o);
    CHECK(lebesgue.max_ratio == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(lebesgue.passed);

    DoublingOptions centred;
    centred.dim = 1;
    centred.centers = 0;
    DoublingReport p = is_doubling(Weight::power(-0.5, 1), 16.0, centred);
    CHECK(p.max_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    Weight ex = Weight::grid_from(v({-10.0}), v({10.0}), {2001}, [](const Vec& x) { return std::exp(x(0)); });
    DoublingOptions small;
    small.dim = 1;
    small.half_sides = {0.125, 0.25, 0.5};
    small.center_range = 5.0;
    DoublingReport g = is_doubling(ex, 16.0, small);
    CHECK(g.passed);
    CHECK(g.max_ratio <= 2.0 * std::exp(2.0 * 1.0) + 1e-9);
  }

  TEST_CASE("pairs") {
    Exponents e = Exponents::make(2.0, 4.0);
    WeightPair p = WeightPair::from_uv(Weight::constant(1.0), Weight::power(0.5, 1), e, 1);
    CHECK(p.w.alpha() == doctest::Approx(-0.5));
    WeightPair q = WeightPair::from_uw(Weight::constant(1.0), p.w, e, 1);
    CHECK(q.v.alpha() == doctest::Approx(0.5));
    CHECK(code_of([&] { WeightPair::from_uv(Weight::power(1.0, 2), Weight::constant(1.0), e, 1); }) ==
          ErrorCode::DimensionMismatch);
  }
}
