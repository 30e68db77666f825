#include <fcntl.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarity/polarity.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
  return static_cast<bool>(out);
}

// Write to a temporary sibling, then rename over the target.
bool write_atomic(const fs::path& p, const std::string& data) {
  fs::path tmp = p;
  tmp += ".tmp";
  if (!write_file(tmp, data)) return false;
  std::error_code ec;
  fs::rename(tmp, p, ec);
  return !ec;
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_text(const Json& table) {
  std::string out;
  const auto& header = table.at("header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i].get<std::string>();
  }
  out += '\n';
  for (const auto& row : table.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i].is_number() ? format_number(row[i].get<double>()) : std::string("nan");
    }
    out += '\n';
  }
  return out;
}

struct EmittedFile {
  std::string path;
  std::string kind;
  std::string contents;
};

std::vector<EmittedFile> emitted_files(const Json& result) {
  std::vector<EmittedFile> files;
  Json report{{"schema_version", result.at("schema_version")},
              {"command", result.at("command")},
              {"seed", result.at("seed")},
              {"report", result.at("report")}};
  files.push_back({"report.json", "json", report.dump(2) + "\n"});
  for (const auto& t : result.at("tables")) files.push_back({t.at("name").get<std::string>(), "csv", csv_text(t)});
  for (const auto& [name, doc] : result.at("documents").items()) files.push_back({name, "json", doc.dump(2) + "\n"});
  return files;
}

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  }
  ~DirectoryLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;
  bool held() const { return fd_ >= 0; }

 private:
  fs::path path_;
  int fd_ = -1;
};

Json tolerances() {
  char* s = nullptr;
  if (polarity_tolerances(&s) != POLARITY_OK) return Json::object();
  Json t = Json::parse(s);
  polarity_string_free(s);
  return t;
}

struct RunAttempt {
  polarity_status status = POLARITY_OK;
  std::string error;
  Json result;
};

RunAttempt invoke(const std::string& command, const std::string& config, std::optional<std::uint64_t> seed) {
  RunAttempt a;
  char* out = nullptr;
  a.status = polarity_run(command.c_str(), config.c_str(), seed ? 1 : 0, seed.value_or(0), &out);
  if (a.status == POLARITY_OK) {
    a.result = Json::parse(out);
    polarity_string_free(out);
  } else {
    a.error = polarity_last_error();
  }
  return a;
}

int run_command(const std::string& command, const fs::path& config_path, const fs::path& out_dir,
                std::optional<std::uint64_t> seed_override) {
  auto config = read_file(config_path);
  if (!config) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitInvalid;
  }
  if (polarity_validate(command.c_str(), config->c_str(), seed_override ? 1 : 0, seed_override.value_or(0)) !=
      POLARITY_OK) {
    std::cerr << "error: " << polarity_last_error() << "\n";
    return kExitInvalid;
  }
  std::uint64_t seed = 0;
  if (seed_override) {
    seed = *seed_override;
  } else {
    seed = Json::parse(*config).at("seed").get<std::uint64_t>();
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    return kExitInvalid;
  }
  DirectoryLock lock(out_dir);
  if (!lock.held()) {
    std::cerr << "error: output directory " << out_dir << " is locked by another run\n";
    return kExitInvalid;
  }

  const std::string started = utc_now();
  RunAttempt a = invoke(command, *config, seed);
  Json manifest{{"schema_version", 1},
                {"tool", "polarity"},
                {"tool_version", polarity_version()},
                {"command", command},
                {"config_path", fs::absolute(config_path).string()},
                {"config_hash", fnv1a64(*config)},
                {"seed", seed},
                {"seed_overridden", seed_override.has_value()},
                {"started_at", started},
                {"tolerances", tolerances()}};
  Json files = Json::array();
  int code = kExitOk;
  if (a.status == POLARITY_OK) {
    const double rel = manifest["tolerances"].value("reproduce_relative", 1e-9);
    const double abs = manifest["tolerances"].value("reproduce_absolute", 1e-12);
    for (const auto& f : emitted_files(a.result)) {
      if (!write_atomic(out_dir / f.path, f.contents)) {
        std::cerr << "error: cannot write " << (out_dir / f.path) << "\n";
        return kExitNumerical;
      }
      files.push_back({{"path", f.path}, {"kind", f.kind}, {"relative_tolerance", rel}, {"absolute_tolerance", abs}});
    }
  } else {
    code = a.status == POLARITY_ERR_CONFIG_INVALID ? kExitInvalid : kExitNumerical;
    manifest["error"] = {{"name", polarity_status_name(a.status)}, {"message", a.error}};
    std::cerr << "error: " << polarity_status_name(a.status) << ": " << a.error << "\n";
  }
  manifest["files"] = files;
  manifest["finished_at"] = utc_now();
  manifest["exit_code"] = code;
  if (!write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n")) {
    std::cerr << "error: cannot write manifest\n";
    return kExitNumerical;
  }
  if (code == kExitOk) std::cout << "wrote " << files.size() << " files to " << out_dir.string() << "\n";
  return code;
}

bool close_enough(double a, double b, double rel, double abs) {
  if (a == b) return true;
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

bool same_json(const Json& a, const Json& b, double rel, double abs, const std::string& where, std::string& why) {
  if (a.is_number() && b.is_number()) {
    if (close_enough(a.get<double>(), b.get<double>(), rel, abs)) return true;
    why = where + ": " + a.dump() + " vs " + b.dump();
    return false;
  }
  if (a.type() != b.type()) {
    why = where + ": type differs";
    return false;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      why = where + ": length differs";
      return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!same_json(a[i], b[i], rel, abs, where + "[" + std::to_string(i) + "]", why)) return false;
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      why = where + ": keys differ";
      return false;
    }
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) {
        why = where + "." + k + ": missing";
        return false;
      }
      if (!same_json(v, b.at(k), rel, abs, where + "." + k, why)) return false;
    }
    return true;
  }
  if (a == b) return true;
  why = where + ": " + a.dump() + " vs " + b.dump();
  return false;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool same_csv(const std::string& a, const std::string& b, double rel, double abs, std::string& why) {
  auto ra = split_csv(a), rb = split_csv(b);
  if (ra.size() != rb.size()) {
    why = "row count differs";
    return false;
  }
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i].size() != rb[i].size()) {
      why = "row " + std::to_string(i) + " width differs";
      return false;
    }
    for (std::size_t k = 0; k < ra[i].size(); ++k) {
      if (ra[i][k] == rb[i][k]) continue;
      char* ea = nullptr;
      char* eb = nullptr;
      const double x = std::strtod(ra[i][k].c_str(), &ea), y = std::strtod(rb[i][k].c_str(), &eb);
      if (*ea != '\0' || *eb != '\0' || !close_enough(x, y, rel, abs)) {
        why = "row " + std::to_string(i) + " column " + std::to_string(k) + ": " + ra[i][k] + " vs " + rb[i][k];
        return false;
      }
    }
  }
  return true;
}

int reproduce(const fs::path& manifest_path) {
  auto text = read_file(manifest_path);
  if (!text) {
    std::cerr << "error: cannot read manifest " << manifest_path << "\n";
    return kExitInvalid;
  }
  Json m;
  try {
    m = Json::parse(*text);
  } catch (const Json::exception& e) {
    std::cerr << "error: manifest is not valid JSON\n";
    return kExitInvalid;
  }
  const std::string config_path = m.value("config_path", "");
  auto config = read_file(config_path);
  if (!config) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitInvalid;
  }
  if (fnv1a64(*config) != m.value("config_hash", "")) {
    std::cerr << "ManifestMismatch: config hash differs from the manifest\n";
    return kExitInvalid;
  }
  const std::string command = m.value("command", "");
  const std::uint64_t seed = m.value("seed", std::uint64_t{0});
  RunAttempt a = invoke(command, *config, seed);
  if (m.contains("error")) {
    const std::string expected = m["error"].value("name", "");
    if (a.status != POLARITY_OK && expected == polarity_status_name(a.status)) {
      std::cout << "reproduced error " << expected << "\n";
      return kExitOk;
    }
    std::cerr << "ManifestMismatch: expected error " << expected << "\n";
    return kExitMismatch;
  }
  if (a.status != POLARITY_OK) {
    std::cerr << "ManifestMismatch: rerun failed with " << polarity_status_name(a.status) << ": " << a.error << "\n";
    return kExitMismatch;
  }
  const fs::path dir = manifest_path.parent_path();
  std::vector<EmittedFile> fresh = emitted_files(a.result);
  std::size_t checked = 0;
  for (const auto& entry : m.value("files", Json::array())) {
    const std::string name = entry.value("path", "");
    const double rel = entry.value("relative_tolerance", 1e-9);
    const double abs = entry.value("absolute_tolerance", 1e-12);
    auto stored = read_file(dir / name);
    const EmittedFile* now = nullptr;
    for (const auto& f : fresh)
      if (f.path == name) now = &f;
    if (!stored || !now) {
      std::cerr << "ManifestMismatch: " << name << " missing\n";
      return kExitMismatch;
    }
    std::string why;
    bool ok = false;
    if (entry.value("kind", "") == "csv") {
      ok = same_csv(*stored, now->contents, rel, abs, why);
    } else {
      try {
        ok = same_json(Json::parse(*stored), Json::parse(now->contents), rel, abs, name, why);
      } catch (const Json::exception&) {
        why = "unparsable";
      }
    }
    if (!ok) {
      std::cerr << "ManifestMismatch: " << name << ": " << why << "\n";
      return kExitMismatch;
    }
    ++checked;
  }
  std::cout << "reproduced " << checked << " files\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for weighted Fourier inequalities and polar bodies", "polarity"};
  app.set_version_flag("--version", std::string(polarity_version()));
  app.require_subcommand(1);

  std::string command, config, out;
  std::optional<std::uint64_t> seed_override;
  auto* run = app.add_subcommand("run", "Run one command from a JSON config");
  run->add_option("command", command, "polar, mahler, check-condition, check-nqprime, comparability, epsilon-map, "
                                       "region, classify, lower-bound, rwt, strong-type, hy, conjecture, mahler-search")
      ->required();
  run->add_option("--config", config, "Config JSON")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed-override", seed_override, "Replace the config seed");

  std::string manifest;
  auto* rep = app.add_subcommand("reproduce", "Re-run a manifest and compare outputs");
  rep->add_option("manifest", manifest, "manifest.json of an earlier run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (*run) return run_command(command, config, out, seed_override);
  return reproduce(manifest);
}
