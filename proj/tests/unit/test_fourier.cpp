#include <doctest.h>

#include "../support/oracles.hpp"
#include "polarity/errors.hpp"
#include "polarity/fourier.hpp"

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

WeightPair lebesgue(const Exponents& e, int n = 1) {
  return WeightPair::from_uv(Weight::constant(1.0), Weight::constant(1.0), e, n);
}

}  // namespace

TEST_SUITE("fourier") {
  TEST_CASE("interval transform") {
    SimpleFunction f = SimpleFunction::indicator(Body::cube(1, 1.0));
    std::vector<Vec> zs;
    for (int k = -40; k <= 40; ++k) zs.push_back(v({0.37 * k}));
    auto vals = transform_at(f, zs);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Complex want = oracle::interval_transform(-1.0, 1.0, zs[i](0));
      CHECK(std::abs(vals[i] - want) <= 1e-12);
    }
    CHECK(std::abs(vals[40] - Complex(2.0)) <= 1e-15);
    // Shifted interval.
    SimpleFunction g = SimpleFunction::indicator(translate(Body::cube(1, 0.5), v({2.0})));
    auto gv = transform_at(g, {v({1.3})});
    CHECK(std::abs(gv[0] - oracle::interval_transform(1.5, 2.5, 1.3)) <= 1e-12);
  }

  TEST_CASE("linearity") {
    SimpleFunction f = SimpleFunction::indicator(Body::cube(1, 1.0));
    SimpleFunction g = f.scaled(Complex(2.0, -1.0));
    auto a = transform_at(f, {v({0.7})});
    auto b = transform_at(g, {v({0.7})});
    CHECK(std::abs(b[0] - Complex(2.0, -1.0) * a[0]) <= 1e-14);
  }

  TEST_CASE("square transform is a product of sincs") {
    SimpleFunction f = SimpleFunction::indicator(Body::cube(2, 1.0));
    std::vector<Vec> zs{v({0.0, 0.0}), v({0.5, -1.2}), v({3.0, 2.0})};
    auto vals = transform_at(f, zs);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Complex want = oracle::interval_transform(-1, 1, zs[i](0)) * oracle::interval_transform(-1, 1, zs[i](1));
      CHECK(std::abs(vals[i] - want) <= 1e-12);
    }
  }

  TEST_CASE("polygon quadrature matches the box closed form") {
    // The square as an H-polytope goes through simplex quadrature.
    Mat a(4, 2);
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    Body h = Body::h_polytope(a, v({1, 1, 1, 1}));
    std::vector<Vec> zs{v({0.0, 0.0}), v({0.5, -1.2}), v({2.0, 1.0})};
    auto vals = region_transform(h, zs);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Complex want = oracle::interval_transform(-1, 1, zs[i](0)) * oracle::interval_transform(-1, 1, zs[i](1));
      CHECK(std::abs(vals[i] - want) <= 1e-4);
    }
  }

  TEST_CASE("disk transform at the origin") {
    auto vals = region_transform(Body::ball(2, 1.0), {v({0.0, 0.0}), v({1.0, 0.0})});
    CHECK(vals[0].real() == doctest::Approx(oracle::kPi));
    // 2 pi J1(r)/r at r = 1 via a radial midpoint oracle.
    const double j1 = oracle::midpoint([](double t) { return std::cos(t - std::sin(t)); }, 0.0, oracle::kPi, 20000) /
                      oracle::kPi;
    CHECK(vals[1].real() == doctest::Approx(2.0 * oracle::kPi * j1).epsilon(1e-8));
  }

  TEST_CASE("lower bound ratios") {
    LowerBoundReport r = lower_bound_check(Body::cube(1, 1.0), 1000, 1);
    CHECK(r.passed);
    CHECK(r.min_ratio == doctest::Approx(std::tan(1.0)).epsilon(1e-3));
    LowerBoundReport d = lower_bound_check(Body::ball(2, 1.0), 1000, 2);
    CHECK(d.min_ratio >= 1.0 - 1e-3);
    // z = 0 alone gives 1 / cos(1).
    auto zero = region_transform(Body::cube(1, 1.0), {v({0.0})});
    CHECK(std::abs(zero[0]) / (std::cos(1.0) * 2.0) == doctest::Approx(1.0 / std::cos(1.0)));
  }

  TEST_CASE("grid transform") {
    GridSpec g = GridSpec::centred(1, 10.0, 64);
    GridFunction ft = fourier_transform(SimpleFunction::indicator(Body::cube(1, 1.0)), g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex want = oracle::interval_transform(-1, 1, g.node(i)(0));
      CHECK(std::abs(ft.values[i] - want) <= 1e-12);
    }
    CHECK(code_of([] {
            fourier_transform(SimpleFunction::indicator(Body::cube(1, 1.0)), GridSpec::centred(1, 1.0, 8));
          }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("restricted weak type with Lebesgue weights") {
    const Exponents e = Exponents::make(2.0, 2.0);
    LevelSetReport r = restricted_weak_type(lebesgue(e), e, Body::cube(1, 1.0));
    CHECK(r.ratio <= std::sqrt(4.0 * oracle::kPi) * 1.01);
    CHECK(r.ratio > 0.0);
    // Levels above |A| are empty.
    for (std::size_t k = 0; k < r.alphas.size(); ++k)
      if (r.alphas[k] > 2.0 * (1 + 1e-12)) CHECK(r.measures[k] == 0.0);
  }

  TEST_CASE("power pair restricted weak type is dilation stable") {
    const Exponents e = Exponents::make(2.0, 4.0);
    WeightPair pair = WeightPair::from_uv(Weight::constant(1.0), Weight::power(0.5, 1), e, 1);
    double lo = INFINITY, hi = 0.0;
    for (int k = -5; k <= 5; k += 2) {
      const double r = restricted_weak_type(pair, e, Body::cube(1, std::ldexp(1.0, k))).ratio;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK((hi - lo) / hi < 0.1);
  }

  TEST_CASE("strong type ratios") {
    const Exponents e = Exponents::make(2.0, 2.0);
    SimpleFunction f = SimpleFunction::indicator(Body::cube(1, 1.0));
    StrongTypeReport r = strong_type_ratio(lebesgue(e), e, {f, f.scaled(3.0)});
    CHECK(r.rows[0].ratio == doctest::Approx(std::sqrt(2.0 * oracle::kPi)).epsilon(0.01));
    CHECK(r.rows[1].ratio == doctest::Approx(r.rows[0].ratio).epsilon(1e-12));
    SimpleFunction zero = f.scaled(0.0);
    CHECK(code_of([&] { strong_type_ratio(lebesgue(e), e, {zero}); }) == ErrorCode::ZeroDenominator);
  }

  TEST_CASE("strong type with integrable weights respects the mass bound") {
    const Exponents e = Exponents::make(2.0, 3.0);
    Weight g = Weight::grid_from(v({-6.0}), v({6.0}), {241}, [](const Vec& x) { return std::exp(-0.5 * x.squaredNorm()); });
    WeightPair pair = WeightPair::from_uw(g, g, e, 1);
    SimpleFunction f = SimpleFunction::indicator(Body::cube(1, 1.0));
    SimpleFunction two{{SimpleTerm{1.0, Body::cube(1, 0.5)}, SimpleTerm{2.0, translate(Body::cube(1, 0.5), v({2.0}))}}};
    StrongTypeReport r = strong_type_ratio(pair, e, {f, two});
    const double mass = integrate(g, Body::cube(1, 6.0)).value;
    CHECK(r.max_ratio <= std::pow(mass, 1.0 / e.q) * std::pow(mass, 1.0 / e.p_conj) * 1.01);
  }

  TEST_CASE("Hausdorff-Young") {
    SimpleFunction f = SimpleFunction::indicator(Body::cube(1, 1.0));
    CHECK(hausdorff_young_check(f, 2.0).ratio == doctest::Approx(std::sqrt(2.0 * oracle::kPi)).epsilon(0.01));
    const double r = hausdorff_young_check(f, 1.5).ratio;
    AutoGridOptions fine;
    fine.spacing_factor = 2.0;
    CHECK(hausdorff_young_check(f, 1.5, fine).ratio == doctest::Approx(r).epsilon(0.01));
    // With p' conjugate the ratio is dilation invariant.
    CHECK(hausdorff_young_check(f.dilated(4.0), 1.5).ratio == doctest::Approx(r).epsilon(0.02));
    CHECK(code_of([&] { hausdorff_young_check(f, 1.0); }) == ErrorCode::ExponentOutOfRange);
  }

  TEST_CASE("disjointness") {
    SimpleFunction overlap{{SimpleTerm{1.0, Body::cube(1, 1.0)}, SimpleTerm{1.0, Body::cube(1, 0.5)}}};
    CHECK(code_of([&] { check_disjoint(overlap); }) == ErrorCode::InvalidArgument);
    SimpleFunction apart{{SimpleTerm{1.0, Body::cube(1, 0.5)}, SimpleTerm{1.0, translate(Body::cube(1, 0.5), v({2.0}))}}};
    check_disjoint(apart);
  }
}
