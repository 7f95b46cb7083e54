#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plap/config.hpp"
#include "plap/csv.hpp"
#include "plap/solver.hpp"

namespace plap {

struct NamedTable {
  std::string name;  // file stem
  Table table;
};

struct Report {
  nlohmann::ordered_json json;  // config echo, results, monotonicity summary
  std::vector<NamedTable> tables;
  MonotonicityStats monotonicity;
};

/// Runs the experiment named by config.kind. Every random input is derived
/// from config.seed, and the tables do not depend on the thread count.
Report run_experiment(const ExperimentConfig& config);

/// Stamps timestamps and tool version into the report and writes
/// report.json plus one CSV per table into `dir`.
void write_report(Report& report, const std::filesystem::path& dir);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace plap
