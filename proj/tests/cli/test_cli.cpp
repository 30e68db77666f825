#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kWork = fs::path(POLARITY_TEST_WORKDIR) / "cli_work";

int run(const std::string& args) {
  const std::string cmd = std::string(POLARITY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const Json& j) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  const fs::path d = kWork / name;
  fs::remove_all(d);
  return d;
}

Json epsilon_config() { return {{"seed", 1}, {"dim", 1}, {"c", 1.0}, {"deltas", {0.5, 1.0, 2.0}}}; }

}  // namespace

TEST_CASE("polar run writes the body, report and manifest") {
  const fs::path cfg = write_config("polar.json", {{"seed", 2}, {"body", {{"variant", "box"}, {"dim", 2}, {"half_extents", {1, 1}}}}});
  const fs::path out = fresh("polar_out");
  REQUIRE(run("run polar --config " + cfg.string() + " --out " + out.string()) == 0);
  Json polar = Json::parse(slurp(out / "polar.json"));
  CHECK(polar["variant"] == "sympoly_v");
  Json m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["seed"] == 2);
  CHECK(m["config_path"] == fs::absolute(cfg).string());
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(m.contains("tolerances"));
  CHECK_FALSE(fs::exists(out / ".lock"));
}

TEST_CASE("epsilon map CSV and reproduce") {
  const fs::path cfg = write_config("eps.json", epsilon_config());
  const fs::path out = fresh("eps_out");
  REQUIRE(run("run epsilon-map --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string csv = slurp(out / "epsilon.csv");
  CHECK(csv.find("delta,epsilon") == 0);
  CHECK(csv.find("0.16666666666666669") != std::string::npos);
  CHECK(csv.find("0.25") != std::string::npos);
  CHECK(run("reproduce " + (out / "manifest.json").string()) == 0);

  // Tampered output is a value mismatch.
  std::ofstream(out / "epsilon.csv") << "delta,epsilon\n0.5,0.2\n1,0.25\n2,0.33333333333333337\n";
  CHECK(run("reproduce " + (out / "manifest.json").string()) == 1);

  // An edited config no longer matches the recorded hash.
  Json edited = epsilon_config();
  edited["c"] = 2.0;
  write_config("eps.json", edited);
  CHECK(run("reproduce " + (out / "manifest.json").string()) == 2);
}

TEST_CASE("validation failures write nothing") {
  Json c = epsilon_config();
  c.erase("seed");
  const fs::path cfg = write_config("noseed.json", c);
  const fs::path out = fresh("noseed_out");
  CHECK(run("run epsilon-map --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run("run epsilon-map --config " + cfg.string() + " --out " + out.string() + " --seed-override 5") == 0);
  CHECK(Json::parse(slurp(out / "manifest.json"))["seed"] == 5);

  CHECK(run("run nonsense --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK(run("run epsilon-map --config " + (kWork / "missing.json").string() + " --out " + out.string()) == 2);
  CHECK(run("--bogus-flag") == 2);
}

TEST_CASE("numerical failures exit 3 and are recorded") {
  const fs::path cfg =
      write_config("off.json", {{"seed", 1}, {"body", {{"variant", "box"}, {"dim", 1}, {"center", {3}}, {"half_extents", {1}}}}});
  const fs::path out = fresh("off_out");
  CHECK(run("run polar --config " + cfg.string() + " --out " + out.string()) == 3);
  Json m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["error"]["name"] == "BodyNotContainingOrigin");
  CHECK(m["files"].empty());
  CHECK(run("reproduce " + (out / "manifest.json").string()) == 0);
}

TEST_CASE("a held lock refuses the run") {
  const fs::path cfg = write_config("eps2.json", epsilon_config());
  const fs::path out = fresh("locked_out");
  fs::create_directories(out);
  std::ofstream(out / ".lock") << "";
  CHECK(run("run epsilon-map --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK_FALSE(fs::exists(out / "manifest.json"));
}
