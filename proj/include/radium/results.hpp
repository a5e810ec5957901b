#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace radium {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rows destined for CSV or JSON output, one column list shared by all rows.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat f);

/// Everything needed to reproduce a result file.
struct RunManifest {
  std::string subcommand;
  /// Resolved configuration, defaults included.
  nlohmann::json config = nlohmann::json::object();
  /// Arguments after the program name; replaying them reruns the experiment.
  std::vector<std::string> arguments;
  std::string output;
  OutputFormat format = OutputFormat::csv;
  std::string timestamp;
  std::string tool_version;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Six significant digits, shortest form.
std::string format_number(double value);

std::string render_csv(const ResultTable& table);
nlohmann::json render_json(const ResultTable& table);

std::filesystem::path manifest_path(const std::filesystem::path& output);

/// Writes the table to manifest.output in the given format plus the
/// `<out>.manifest.json` sidecar. Throws std::runtime_error on I/O failure.
void write_results(const ResultTable& table, const RunManifest& manifest, OutputFormat format);

}  // namespace radium
