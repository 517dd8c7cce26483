#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fpflab {

/// Tabular experiment output plus the resolved configuration and the seeds
/// that produced it. Rows are a pure function of (config, seeds).
struct ExperimentReport {
  using Cell = std::variant<std::int64_t, double, std::string>;

  std::string name;
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::uint64_t> seeds;
};

std::string format_cell(const ExperimentReport::Cell& cell);

void write_report_csv(const ExperimentReport& report, std::ostream& out);
/// Sidecar with experiment name, resolved config, seeds, and column names.
void write_report_json(const ExperimentReport& report, std::ostream& out);

std::string report_csv_string(const ExperimentReport& report);

struct ReportPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes `<name>_<timestamp>_<seed>.csv` and `.json` under dir (created if
/// needed). File contents carry no timestamp, so reruns are byte-identical.
ReportPaths write_report_files(const ExperimentReport& report,
                               const std::filesystem::path& dir);

}  // namespace fpflab
