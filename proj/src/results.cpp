#include "radium/results.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace radium {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("ResultTable: row width does not match header");
  }
  rows.push_back(std::move(row));
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format: " + name);
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

nlohmann::json RunManifest::to_json() const {
  return {{"subcommand", subcommand},   {"config", config},
          {"arguments", arguments},     {"output", output},
          {"format", to_string(format)}, {"timestamp", timestamp},
          {"tool_version", tool_version}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.config = j.value("config", nlohmann::json::object());
  m.arguments = j.at("arguments").get<std::vector<std::string>>();
  m.output = j.value("output", std::string{});
  m.format = parse_format(j.value("format", std::string{"csv"}));
  m.timestamp = j.value("timestamp", std::string{});
  m.tool_version = j.value("tool_version", std::string{});
  return m;
}

std::string format_number(double value) { return fmt::format("{:.6g}", value); }

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    // Same rounding as the CSV rendering.
    return std::stod(format_number(*d));
  }
  return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string render_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i != 0) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i != 0) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json render_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_results(const ResultTable& table, const RunManifest& manifest, OutputFormat format) {
  if (manifest.output.empty()) throw std::runtime_error("write_results: no output path");
  const std::string body =
      format == OutputFormat::csv ? render_csv(table) : render_json(table).dump(2) + "\n";
  write_file(manifest.output, body);
  write_file(manifest_path(manifest.output), manifest.to_json().dump(2) + "\n");
}

}  // namespace radium
