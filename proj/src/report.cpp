#include "fluxlab/report.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <fstream>

#include "fluxlab/error.hpp"

#ifndef FLUXLAB_GIT_DESCRIBE
#define FLUXLAB_GIT_DESCRIBE "unknown"
#endif

namespace fluxlab {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void CsvTable::add(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw Error(ErrorKind::InvalidArgument, "row width does not match the columns of " + name);
  rows.push_back(std::move(cells));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

}  // namespace

void write_csv(const std::filesystem::path& dir, const CsvTable& table, const ReportHeader& header) {
  std::ofstream out = open_out(dir / (table.name + ".csv"));
  out << "# schema=" << kReportSchema << " experiment=" << header.experiment << " config_sha256=" << header.config_hash
      << '\n';
  out << join(table.columns) << '\n';
  for (const auto& row : table.rows) out << join(row) << '\n';
  if (!out) throw Error(ErrorKind::Io, "short write on " + table.name + ".csv");
}

void write_summary(const std::filesystem::path& dir, const ReportHeader& header, const nlohmann::ordered_json& config,
                   const nlohmann::ordered_json& result) {
  nlohmann::ordered_json j;
  j["header"] = {{"schema", std::string(kReportSchema)},
                 {"experiment", header.experiment},
                 {"config_sha256", header.config_hash},
                 {"git_describe", git_describe()},
                 {"timestamp", utc_timestamp()}};
  j["config"] = config;
  j["result"] = result;
  std::ofstream out = open_out(dir / "summary.json");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "short write on summary.json");
}

bool has_current_schema(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line;
  if (!std::getline(in, line)) return false;
  return line.rfind("# schema=" + std::string(kReportSchema) + " ", 0) == 0;
}

std::string git_describe() { return FLUXLAB_GIT_DESCRIBE; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

}  // namespace fluxlab
