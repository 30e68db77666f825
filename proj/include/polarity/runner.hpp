#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polarity/serialization.hpp"

namespace polarity {

inline constexpr int kSchemaVersion = 1;

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct RunOutput {
  Json report;
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, Json>> documents;  // extra JSON files
};

const std::vector<std::string>& command_names();

// Default tolerances in effect for every module, plus the relative and
// absolute tolerances used when a rerun is compared against stored output.
Json tolerance_table();

struct PreparedRun {
  std::string command;
  std::uint64_t seed = 0;
  std::function<RunOutput()> execute;
};

// Parses and validates the configuration without doing any numerical work.
// Every failure here is a validation failure and raises ConfigInvalid.
PreparedRun prepare_run(const std::string& command, const Json& config, std::optional<std::uint64_t> seed_override);

// Result document: {"schema_version", "command", "seed", "report", "tables", "documents"}.
Json output_to_json(const PreparedRun& run, const RunOutput& out);

}  // namespace polarity
