#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fluxlab {

inline constexpr std::string_view kReportSchema = "fluxlab-report-v1";

/// printf %.17g: every double round-trips.
[[nodiscard]] std::string num(double v);

struct CsvTable {
  std::string name;  ///< file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> cells);
};

struct ReportHeader {
  std::string experiment;
  std::string config_hash;
};

/// DIR/NAME.csv. The first line is a comment naming the schema, experiment and
/// config hash; no timestamps, so identical inputs give identical bytes.
void write_csv(const std::filesystem::path& dir, const CsvTable& table, const ReportHeader& header);

/// DIR/summary.json: {"header": {schema, experiment, config_sha256, git_describe,
/// timestamp}, "config": ..., "result": ...}. Volatile fields live only in the header.
void write_summary(const std::filesystem::path& dir, const ReportHeader& header, const nlohmann::ordered_json& config,
                   const nlohmann::ordered_json& result);

/// Reads the first line of a CSV written by write_csv and checks the schema tag.
[[nodiscard]] bool has_current_schema(const std::filesystem::path& csv);

[[nodiscard]] std::string git_describe();
[[nodiscard]] std::string utc_timestamp();

}  // namespace fluxlab
