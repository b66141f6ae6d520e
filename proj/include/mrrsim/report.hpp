#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mrrsim {

// One table cell. Numbers render through the 12-significant-digit formatter
// so CSV and JSON bytes are stable across runs and platforms.
using ReportCell = std::variant<std::string, double, std::int64_t>;

struct Report {
  std::string command;
  nlohmann::json config;  // fully resolved run configuration
  std::vector<std::string> columns;
  std::vector<std::vector<ReportCell>> rows;
  // Named side results (chosen config, summary totals); rendered as comment
  // lines in CSV and top-level fields in JSON.
  std::vector<std::pair<std::string, nlohmann::json>> extras;
};

std::string format_g12(double v);

// Rounds through the 12-digit decimal form, so JSON numbers match the CSV text.
double round_g12(double v);

// Recursively rounds every number in a JSON value through round_g12.
nlohmann::json round_json_g12(const nlohmann::json& j);

std::string render_report(const Report& r, const std::string& format);

// Runs one subcommand from its config object and returns the filled report.
// Valid commands: device-curve, mac-sim, energy, dse, profile, map.
Report run_command(const std::string& command, const nlohmann::json& config);

// Convenience wrapper: run_command + render with the config's format.
std::string run_command_text(const std::string& command, const nlohmann::json& config);

}  // namespace mrrsim
