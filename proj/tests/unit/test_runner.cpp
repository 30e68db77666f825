#include <doctest.h>

#include "polarity/errors.hpp"
#include "polarity/runner.hpp"

using namespace polarity;

namespace {

std::string invalid_message(const std::string& command, const Json& config) {
  try {
    prepare_run(command, config, std::nullopt);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  FAIL("expected ConfigInvalid");
  return {};
}

Json epsilon_config() { return {{"seed", 1}, {"dim", 1}, {"c", 1.0}, {"deltas", {0.5, 1.0, 2.0}}}; }

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("every command is known") {
    CHECK(command_names().size() == 14);
    invalid_message("frobnicate", epsilon_config());
  }

  TEST_CASE("epsilon map rows") {
    PreparedRun run = prepare_run("epsilon-map", epsilon_config(), std::nullopt);
    RunOutput out = run.execute();
    REQUIRE(out.tables.size() == 1);
    const auto& rows = out.tables[0].rows;
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(rows[1][1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rows[2][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    Json doc = output_to_json(run, out);
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["command"] == "epsilon-map");
  }

  TEST_CASE("seed handling") {
    Json c = epsilon_config();
    c.erase("seed");
    invalid_message("epsilon-map", c);
    CHECK(prepare_run("epsilon-map", c, 77).seed == 77);
    c["seed"] = -3;
    invalid_message("epsilon-map", c);
  }

  TEST_CASE("schema version") {
    Json c = epsilon_config();
    c["schema_version"] = 1;
    CHECK_NOTHROW(prepare_run("epsilon-map", c, std::nullopt));
    c["schema_version"] = 2;
    invalid_message("epsilon-map", c);
  }

  TEST_CASE("module errors are reported as validation failures") {
    Json c = epsilon_config();
    c["deltas"] = {0.5, -1.0};
    CHECK(invalid_message("epsilon-map", c).find("ExponentOutOfRange") != std::string::npos);
    Json p = {{"seed", 1},
              {"exponents", {{"p", 1.0}, {"q", 2.0}}},
              {"pair", {{"dim", 1}, {"u", {{"kind", "constant"}, {"value", 1.0}}}, {"w", {{"kind", "constant"}, {"value", 1.0}}}}}};
    CHECK(invalid_message("check-condition", p).find("ExponentOutOfRange") != std::string::npos);
  }

  TEST_CASE("polar command") {
    Json c = {{"seed", 3}, {"body", {{"variant", "box"}, {"dim", 2}, {"half_extents", {1.0, 1.0}}}}};
    RunOutput out = prepare_run("polar", c, std::nullopt).execute();
    CHECK(out.report["polar"]["variant"] == "sympoly_v");
    CHECK(out.report["polar_volume"]["value"].get<double>() == doctest::Approx(2.0));
    REQUIRE(out.documents.size() == 1);
    CHECK(out.documents[0].first == "polar.json");
  }

  TEST_CASE("tolerance table") {
    Json t = tolerance_table();
    CHECK(t.contains("reproduce_relative"));
    CHECK(t.contains("reproduce_absolute"));
  }
}
