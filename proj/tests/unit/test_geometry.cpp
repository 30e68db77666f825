#include <doctest.h>

#include "../support/oracles.hpp"
#include "polarity/errors.hpp"
#include "polarity/geometry.hpp"

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

// Brute-force polar membership straight from the definition: |x.z| <= 1 over
// a dense sample of E.
bool polar_by_definition(const std::vector<Vec>& e_points, const Vec& z) {
  for (const auto& x : e_points)
    if (std::abs(x.dot(z)) > 1.0 + 1e-9) return false;
  return true;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("polar of a centred interval") {
    Body p = polar(Body::box(v({0.0}), v({2.0})));
    auto [lo, hi] = interval_of(p);
    CHECK(lo == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("unit disk is self dual") {
    Body p = polar(Body::ball(2, 1.0));
    const auto* e = p.get_if<Ellipsoid>();
    REQUIRE(e);
    CHECK((e->shape - Mat::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("ellipse semiaxes invert under polarity") {
    Mat a = Vec(v({0.25, 4.0})).asDiagonal();
    Body e = Body::ellipsoid(Vec::Zero(2), a);
    Body p = polar(e);
    const auto* pe = p.get_if<Ellipsoid>();
    REQUIRE(pe);
    CHECK(pe->shape(0, 0) == doctest::Approx(4.0));
    CHECK(pe->shape(1, 1) == doctest::Approx(0.25));
    // Sampled points of the polar satisfy the defining inequality against a
    // dense boundary of E.
    std::vector<Vec> boundary;
    for (int k = 0; k < 4000; ++k) {
      const double t = 2.0 * oracle::kPi * k / 4000.0;
      boundary.push_back(v({2.0 * std::cos(t), 0.5 * std::sin(t)}));
    }
    for (const auto& z : sample_uniform(p, 10000, 3)) CHECK(polar_by_definition(boundary, z * (1.0 - 1e-6)));
  }

  TEST_CASE("unit square polar is the cross polytope") {
    Body p = polar(Body::cube(2, 1.0));
    const auto* g = p.get_if<SymPolytopeV>();
    REQUIRE(g);
    CHECK(p.variant_name() == "sympoly_v");
    // 200 x 200 scan of the definition using the square's vertices.
    std::vector<Vec> corners{v({1, 1}), v({1, -1}), v({-1, 1}), v({-1, -1})};
    int mismatches = 0;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        Vec z = v({-1.5 + 3.0 * (i + 0.5) / 200.0, -1.5 + 3.0 * (j + 0.5) / 200.0});
        if (contains(p, z) != polar_by_definition(corners, z)) ++mismatches;
      }
    CHECK(mismatches == 0);
  }

  TEST_CASE("polar error cases") {
    CHECK(code_of([] { polar(Body::cube(1, 1.0, v({1.0}))); }) == ErrorCode::UnboundedBody);
    CHECK(code_of([] { polar(Body::cube(1, 1.0, v({3.0}))); }) == ErrorCode::BodyNotContainingOrigin);
    Mat a(3, 2);
    a << 1, 0, 0, 1, -1, -1;
    CHECK(code_of([&] { polar(Body::h_polytope(a, v({1, 1, 1}))); }) == ErrorCode::NonSymmetricHPolytope);
    CHECK(code_of([] { polar(Body::ellipsoid(v({0.2, 0.0}), Mat::Identity(2, 2))); }) ==
          ErrorCode::NonSymmetricBody);
  }

  TEST_CASE("off-centre box polar matches the definition") {
    Body b = Body::box(v({0.3, -0.2}), v({1.0, 0.5}));
    Body p = polar(b);
    std::vector<Vec> pts;
    for (double sx : {-1.0, 1.0})
      for (double sy : {-1.0, 1.0}) pts.push_back(v({0.3 + sx, -0.2 + 0.5 * sy}));
    Rng rng(4);
    for (int k = 0; k < 5000; ++k) {
      Vec z = v({rng.uniform(-4, 4), rng.uniform(-4, 4)});
      CHECK(contains(p, z) == polar_by_definition(pts, z));
    }
  }

  TEST_CASE("translate") {
    Body b = Body::cube(1, 1.0);
    TranslatedBody t = translate(b, v({3.0}));
    CHECK(contains(t, v({3.0})));
    CHECK_FALSE(contains(t, v({0.0})));
    auto [lo, hi] = interval_of(t);
    CHECK(lo == 2.0);
    CHECK(hi == 4.0);
    TranslatedBody back = translate(t, v({-3.0}));
    Rng rng(5);
    for (int k = 0; k < 1000; ++k) {
      Vec x = v({rng.uniform(-5, 5)});
      CHECK(contains(back, x) == contains(b, x));
    }
    CHECK_FALSE(translate(b, v({0.0})).has_shift());
  }

  TEST_CASE("membership") {
    CHECK(contains(Body::ball(2, 1.0), v({0.5, 0.5})));
    CHECK_FALSE(contains(Body::cube(2, 1.0), v({1.0000001, 0.0})));
    CHECK(contains(polar(Body::cube(2, 1.0)), v({0.5, 0.5})));
  }

  TEST_CASE("exact volumes") {
    CHECK(volume(Body::cube(2, 1.0)).value == 4.0);
    CHECK(volume(Body::cube(2, 1.0)).is_exact());
    Estimate cross = volume(polar(Body::cube(3, 1.0)));
    CHECK(cross.is_exact());
    CHECK(cross.value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(volume(Body::ball(2, 1.0)).value == doctest::Approx(oracle::kPi).epsilon(1e-14));
  }

  TEST_CASE("Monte Carlo volumes agree with closed forms") {
    VolumeOptions mc;
    mc.method = VolumeMethod::MonteCarlo;
    mc.samples = 1000000;
    mc.seed = 17;
    Estimate cross = volume(polar(Body::cube(3, 1.0)), mc);
    CHECK(std::abs(cross.value - 4.0 / 3.0) <= cross.abs_error);
    Estimate disk = volume(Body::ball(2, 1.0), mc);
    CHECK(std::abs(disk.value - oracle::kPi) <= 0.005 * oracle::kPi);
    CHECK(disk.method == Method::MonteCarlo);
  }

  TEST_CASE("polygon areas match an independent hull") {
    for (int i = 0; i < 30; ++i) {
      Rng rng = Rng::substream(91, {static_cast<std::uint64_t>(i)});
      Body b = oracle::random_symmetric_body(2, rng, 2);
      std::vector<Eigen::Vector2d> pts;
      const Mat& g = b.get_if<SymPolytopeV>()->generators;
      for (Eigen::Index r = 0; r < g.rows(); ++r) {
        pts.emplace_back(g(r, 0), g(r, 1));
        pts.emplace_back(-g(r, 0), -g(r, 1));
      }
      CHECK(volume(b).value == doctest::Approx(oracle::hull_area(pts)).epsilon(1e-12));
    }
  }

  TEST_CASE("volume validation") {
    VolumeOptions small;
    small.method = VolumeMethod::MonteCarlo;
    small.samples = 999;
    CHECK(code_of([&] { volume(Body::ball(2, 1.0), small); }) == ErrorCode::SampleBudgetTooSmall);
    VolumeOptions mc;
    mc.method = VolumeMethod::MonteCarlo;
    CHECK(code_of([&] { volume(Body::ball(7, 1.0), mc); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("Mahler volumes") {
    for (double a : {0.1, 1.0, 7.0}) CHECK(mahler_volume(Body::cube(1, a)).value == doctest::Approx(4.0));
    CHECK(mahler_volume(Body::box(Vec::Zero(2), v({0.3, 5.0}))).value == doctest::Approx(8.0));
    CHECK(mahler_volume(Body::cube(3, 1.0)).value == doctest::Approx(32.0 / 3.0));
    CHECK(mahler_volume(Body::ball(2, 1.0)).value == doctest::Approx(oracle::kPi * oracle::kPi));
    CHECK(code_of([] { mahler_volume(Body::cube(2, 1.0, v({0.1, 0.0}))); }) == ErrorCode::NonSymmetricBody);
  }

  TEST_CASE("Mahler volume is linear invariant") {
    Rng rng(12);
    for (int i = 0; i < 10; ++i) {
      Body b = oracle::random_symmetric_body(2, rng, i);
      const double m = mahler_volume(b).value;
      CHECK(mahler_volume(scaled(b, 3.0)).value == doctest::Approx(m).epsilon(1e-12));
    }
  }

  TEST_CASE("John ellipsoid of the square and the cross polytope") {
    JohnResult sq = loewner_john(Body::cube(2, 1.0));
    const Mat& s = sq.inner.get_if<Ellipsoid>()->shape;
    CHECK((s - Mat::Identity(2, 2)).norm() < 1e-2);
    CHECK(sq.factor <= std::sqrt(2.0) * (1 + 1e-3));
    CHECK(sq.verified);
    for (const auto& c : {v({1, 1}), v({-1, 1})}) CHECK(contains(sq.outer, c));

    JohnResult cr = loewner_john(polar(Body::cube(2, 1.0)));
    const Mat& t = cr.inner.get_if<Ellipsoid>()->shape;
    CHECK((t - 2.0 * Mat::Identity(2, 2)).norm() < 2e-2);
  }

  TEST_CASE("John ellipsoid recovers an ellipse from its axis points") {
    Mat g(2, 2);
    g << 2.0, 0.0, 0.0, 0.5;
    JohnResult r = loewner_john(Body::sym_polytope(g));
    // Outer ellipse passes through (2, 0) and (0, 0.5).
    const Mat& o = r.outer.get_if<Ellipsoid>()->shape;
    CHECK(o(0, 0) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(o(1, 1) == doctest::Approx(4.0).epsilon(1e-3));
  }

  TEST_CASE("rectangle sandwich") {
    Body r = rect_ellipsoid_sandwich(Body::ball(2, 1.0));
    const auto* b = r.get_if<Box>();
    REQUIRE(b);
    CHECK(b->half_extents(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    Mat a = Vec(v({0.25, 4.0})).asDiagonal();
    Body e = Body::ellipsoid(Vec::Zero(2), a);
    Body r2 = rect_ellipsoid_sandwich(e);
    const auto* b2 = r2.get_if<Box>();
    std::vector<double> h{b2->half_extents(0), b2->half_extents(1)};
    std::sort(h.begin(), h.end());
    CHECK(h[0] == doctest::Approx(0.5 / std::sqrt(2.0)));
    CHECK(h[1] == doctest::Approx(2.0 / std::sqrt(2.0)));
    // R inside S inside sqrt(n) R on random ellipsoids.
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
      Body s = oracle::random_symmetric_body(3, rng, 1);
      Body box = rect_ellipsoid_sandwich(s);
      for (const auto& x : sample_uniform(box, 500, i)) CHECK(contains(s, x));
      Body big = scaled(box, std::sqrt(3.0));
      for (const auto& x : sample_uniform(s, 500, i)) CHECK(contains(big, x));
    }
    Body one = rect_ellipsoid_sandwich(Body::ball(1, 2.0));
    CHECK(one.get_if<Box>()->half_extents(0) == doctest::Approx(2.0));
  }

  TEST_CASE("translated polar") {
    Body e = Body::cube(1, 1.0);
    TranslatedBody f = translated_polar(e, v({0.5}), v({2.0}));
    auto [lo, hi] = interval_of(f);
    // (E + 0.5) = [-0.5, 1.5], polar [-2/3, 2/3], then shifted by 2.
    CHECK(lo == doctest::Approx(2.0 - 2.0 / 3.0));
    CHECK(hi == doctest::Approx(2.0 + 2.0 / 3.0));
  }
}
