#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>

#include "polarity/polarity.h"

namespace {

std::string take(char* s) {
  std::string r = s ? s : "";
  polarity_string_free(s);
  return r;
}

polarity_body* make_body(const char* json) {
  polarity_body* b = nullptr;
  REQUIRE(polarity_body_from_json(json, &b) == POLARITY_OK);
  return b;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(polarity_version()).size() > 0);
  CHECK(std::string(polarity_status_name(POLARITY_OK)) == "Ok");
  CHECK(std::string(polarity_status_name(POLARITY_ERR_BODY_NOT_CONTAINING_ORIGIN)) == "BodyNotContainingOrigin");
  CHECK(std::string(polarity_status_name(POLARITY_ERR_MANIFEST_MISMATCH)) == "ManifestMismatch");
  CHECK(std::string(polarity_status_name(POLARITY_ERR_INTERNAL)) == "Internal");
}

TEST_CASE("body handles") {
  polarity_body* sq = make_body(R"({"variant":"box","dim":2,"half_extents":[1,1]})");
  int dim = 0;
  CHECK(polarity_body_dim(sq, &dim) == POLARITY_OK);
  CHECK(dim == 2);
  const double inside[2] = {0.5, -0.9}, outside[2] = {1.2, 0.0};
  int in = -1;
  CHECK(polarity_body_contains(sq, inside, 2, &in) == POLARITY_OK);
  CHECK(in == 1);
  CHECK(polarity_body_contains(sq, outside, 2, &in) == POLARITY_OK);
  CHECK(in == 0);
  CHECK(polarity_body_contains(sq, inside, 3, &in) == POLARITY_ERR_DIMENSION_MISMATCH);

  polarity_body* p = nullptr;
  REQUIRE(polarity_body_polar(sq, &p) == POLARITY_OK);
  polarity_estimate v{};
  CHECK(polarity_body_volume(p, 0, 0, &v) == POLARITY_OK);
  CHECK(v.value == doctest::Approx(2.0));
  CHECK(v.exact == 1);
  CHECK(polarity_mahler_volume(sq, 0, 0, &v) == POLARITY_OK);
  CHECK(v.value == doctest::Approx(8.0));
  char* s = nullptr;
  CHECK(polarity_body_to_json(p, &s) == POLARITY_OK);
  CHECK(nlohmann::json::parse(take(s))["variant"] == "sympoly_v");
  polarity_body_free(p);
  polarity_body_free(sq);
}

TEST_CASE("Monte Carlo volume is seeded") {
  polarity_body* d = make_body(R"({"variant":"ellipsoid","dim":2,"shape":[1,0,0,1]})");
  polarity_estimate a{}, b{};
  CHECK(polarity_body_volume(d, 200000, 11, &a) == POLARITY_OK);
  CHECK(polarity_body_volume(d, 200000, 11, &b) == POLARITY_OK);
  CHECK(a.value == b.value);
  CHECK(a.exact == 0);
  CHECK(std::abs(a.value - M_PI) <= a.abs_error);
  polarity_body_free(d);
}

TEST_CASE("errors carry a status and a message") {
  polarity_body* b = nullptr;
  CHECK(polarity_body_from_json("{not json", &b) == POLARITY_ERR_CONFIG_INVALID);
  CHECK(b == nullptr);
  CHECK(std::string(polarity_last_error()).size() > 0);
  polarity_body* off = make_body(R"({"variant":"box","dim":1,"center":[3],"half_extents":[1]})");
  polarity_body* p = nullptr;
  CHECK(polarity_body_polar(off, &p) == POLARITY_ERR_BODY_NOT_CONTAINING_ORIGIN);
  polarity_body_free(off);
  double x = 0;
  CHECK(polarity_conjugate(1.0, &x) == POLARITY_ERR_EXPONENT_OUT_OF_RANGE);
  CHECK(polarity_body_dim(nullptr, nullptr) == POLARITY_ERR_INVALID_ARGUMENT);
}

TEST_CASE("weights") {
  polarity_weight* w = nullptr;
  REQUIRE(polarity_weight_from_json(R"({"kind":"power","alpha":0.5})", 1, &w) == POLARITY_OK);
  const double x[1] = {4.0};
  double y = 0;
  CHECK(polarity_weight_eval(w, x, 1, &y) == POLARITY_OK);
  CHECK(y == doctest::Approx(2.0));
  polarity_body* unit = make_body(R"({"variant":"box","dim":1,"half_extents":[1]})");
  polarity_estimate m{};
  CHECK(polarity_weight_integrate(w, unit, 0, 0, &m) == POLARITY_OK);
  CHECK(m.value == doctest::Approx(4.0 / 3.0));
  char* s = nullptr;
  CHECK(polarity_weight_to_json(w, &s) == POLARITY_OK);
  CHECK(nlohmann::json::parse(take(s))["kind"] == "power");
  polarity_body_free(unit);
  polarity_weight_free(w);
  CHECK(polarity_weight_from_json(R"({"kind":"power","alpha":-1})", 1, &w) == POLARITY_ERR_NOT_LOCALLY_INTEGRABLE);
}

TEST_CASE("scalar helpers") {
  double x = 0;
  CHECK(polarity_conjugate(4.0, &x) == POLARITY_OK);
  CHECK(x == doctest::Approx(4.0 / 3.0));
  CHECK(polarity_epsilon_of_delta(1.0, 1.0, 1, &x) == POLARITY_OK);
  CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("commands, validation and runs") {
  char* s = nullptr;
  REQUIRE(polarity_commands(&s) == POLARITY_OK);
  CHECK(nlohmann::json::parse(take(s)).size() == 14);
  REQUIRE(polarity_tolerances(&s) == POLARITY_OK);
  CHECK(nlohmann::json::parse(take(s)).contains("reproduce_relative"));

  const char* cfg = R"({"dim":1,"c":1.0,"deltas":[0.5,1,2]})";
  CHECK(polarity_validate("epsilon-map", cfg, 0, 0) == POLARITY_ERR_CONFIG_INVALID);
  CHECK(polarity_validate("epsilon-map", cfg, 1, 4) == POLARITY_OK);
  REQUIRE(polarity_run("epsilon-map", cfg, 1, 4, &s) == POLARITY_OK);
  nlohmann::json r = nlohmann::json::parse(take(s));
  CHECK(r["seed"] == 4);
  CHECK(r["tables"][0]["rows"][0][1].get<double>() == doctest::Approx(1.0 / 6.0));

  const char* off = R"({"seed":1,"body":{"variant":"box","dim":1,"center":[3],"half_extents":[1]}})";
  CHECK(polarity_validate("polar", off, 0, 0) == POLARITY_OK);
  CHECK(polarity_run("polar", off, 0, 0, &s) == POLARITY_ERR_BODY_NOT_CONTAINING_ORIGIN);
}
