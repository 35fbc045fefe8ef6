#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "photamp/cli/run_config.hpp"

namespace photamp::cli {

/// Column-oriented numeric table. The key column comes first in CSV output and
/// is emitted under "tau" in JSON.
struct Table {
  std::string key_name = "tau";
  std::vector<double> key;
  std::vector<std::pair<std::string, std::vector<double>>> series;

  void add(std::string label, std::vector<double> values) {
    series.emplace_back(std::move(label), std::move(values));
  }
};

struct CommandResult {
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  int exit_code = kSuccess;
  std::string diagnostic;
  std::vector<std::string> warnings;
};

/// 12 significant digits, fixed C-locale formatting.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Short label text for a parameter value, e.g. 0.5 -> "0.5".
inline std::string format_label_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const Table& table) {
  out << table.key_name;
  for (const auto& [label, values] : table.series) out << ',' << label;
  out << '\n';
  for (std::size_t row = 0; row < table.key.size(); ++row) {
    out << format_number(table.key[row]);
    for (const auto& [label, values] : table.series) out << ',' << format_number(values[row]);
    out << '\n';
  }
}

inline nlohmann::ordered_json config_to_json(const RunConfig& config) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.parameters) params[k] = v;
  return {{"command", std::string(to_string(config.command))}, {"parameters", params}};
}

inline void write_json(std::ostream& out, const RunConfig& config, const CommandResult& result) {
  nlohmann::ordered_json doc;
  doc["config"] = config_to_json(config);
  doc["tau"] = result.table.key;
  nlohmann::ordered_json series = nlohmann::ordered_json::object();
  for (const auto& [label, values] : result.table.series) series[label] = values;
  doc["series"] = series;
  doc["summary"] = result.summary;
  out << doc.dump(2) << '\n';
}

}  // namespace photamp::cli
