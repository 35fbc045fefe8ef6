#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "photamp/numerics.hpp"

namespace photamp::cli {

/// Exit codes shared by the command-line front end.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kIo = 2, kValidation = 3 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { fig1, fig2, fig3, wigner, exact_compare, discriminate, sweep };

inline constexpr std::array<std::pair<Command, std::string_view>, 7> kCommandNames{{
    {Command::fig1, "fig1"},
    {Command::fig2, "fig2"},
    {Command::fig3, "fig3"},
    {Command::wigner, "wigner"},
    {Command::exact_compare, "exact-compare"},
    {Command::discriminate, "discriminate"},
    {Command::sweep, "sweep"},
}};

inline std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  return "unknown";
}

inline Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames)
    if (n == name) return cmd;
  throw UsageError("unknown command '" + std::string(name) + "'");
}

inline constexpr std::array<std::string_view, 15> kParameterKeys{
    "n_e",         "n",      "intensity", "N",      "grid_points",
    "tau_min",     "tau_max", "epsilon",  "output_path", "format",
    "j",           "m_prime", "m",        "observed", "n_max"};

inline bool is_parameter_key(std::string_view key) {
  return std::find(kParameterKeys.begin(), kParameterKeys.end(), key) != kParameterKeys.end();
}

namespace detail {

inline std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses a real number. Besides plain decimals, accepts multiples and
/// fractions of pi: "pi", "2pi", "2*pi", "pi/2", "3*pi/4".
inline double parse_real(std::string_view text) {
  const std::string s = detail::trim(text);
  if (auto v = detail::parse_plain_number(s)) return *v;

  const auto pos = s.find("pi");
  if (pos == std::string::npos) throw UsageError("not a number: '" + s + "'");
  std::string coef = detail::trim(std::string_view(s).substr(0, pos));
  if (!coef.empty() && coef.back() == '*') coef = detail::trim(std::string_view(coef).substr(0, coef.size() - 1));
  double value = std::numbers::pi;
  if (coef == "-")
    value = -value;
  else if (!coef.empty()) {
    const auto c = detail::parse_plain_number(coef);
    if (!c) throw UsageError("not a number: '" + s + "'");
    value *= *c;
  }
  const std::string rest = detail::trim(std::string_view(s).substr(pos + 2));
  if (!rest.empty()) {
    if (rest.front() != '/') throw UsageError("not a number: '" + s + "'");
    const auto den = detail::parse_plain_number(detail::trim(std::string_view(rest).substr(1)));
    if (!den || *den == 0.0) throw UsageError("not a number: '" + s + "'");
    value /= *den;
  }
  return value;
}

inline unsigned parse_unsigned(std::string_view text) {
  const std::string s = detail::trim(text);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw UsageError("not a non-negative integer: '" + s + "'");
  return value;
}

/// "3", "3/2", "-1/2" or "1.5".
inline HalfInteger parse_half_integer(std::string_view text) {
  const std::string s = detail::trim(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const auto num = detail::parse_plain_number(detail::trim(std::string_view(s).substr(0, slash)));
    const auto den = detail::trim(std::string_view(s).substr(slash + 1));
    if (!num || den != "2" || *num != std::round(*num)) throw UsageError("not a half-integer: '" + s + "'");
    return HalfInteger::from_twice(static_cast<int>(*num));
  }
  const auto v = detail::parse_plain_number(s);
  if (!v || 2.0 * *v != std::round(2.0 * *v)) throw UsageError("not a half-integer: '" + s + "'");
  return HalfInteger::from_twice(static_cast<int>(std::lround(2.0 * *v)));
}

/// Reads `key = value` lines. Blank lines and lines starting with '#' are ignored.
inline std::map<std::string, std::string> parse_key_value(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    if (!is_parameter_key(key))
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    out[key] = detail::trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_key_value(in);
}

/// A subcommand plus its string-valued parameters. Typed accessors apply defaults.
struct RunConfig {
  Command command = Command::fig1;
  std::map<std::string, std::string> parameters;

  bool has(const std::string& key) const { return parameters.contains(key); }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  }
  double get_real(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : parse_real(it->second);
  }
  double require_real(const std::string& key) const {
    if (!has(key)) throw UsageError("missing required parameter '" + key + "'");
    return parse_real(parameters.at(key));
  }
  unsigned get_unsigned(const std::string& key, unsigned fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : parse_unsigned(it->second);
  }
  HalfInteger require_half_integer(const std::string& key) const {
    if (!has(key)) throw UsageError("missing required parameter '" + key + "'");
    return parse_half_integer(parameters.at(key));
  }
  std::vector<unsigned> get_unsigned_list(const std::string& key, std::vector<unsigned> fallback) const {
    auto it = parameters.find(key);
    if (it == parameters.end()) return fallback;
    std::vector<unsigned> out;
    for (const auto& item : detail::split_list(it->second)) out.push_back(parse_unsigned(item));
    return out;
  }
  std::vector<double> get_real_list(const std::string& key, std::vector<double> fallback) const {
    auto it = parameters.find(key);
    if (it == parameters.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : detail::split_list(it->second)) out.push_back(parse_real(item));
    return out;
  }

  unsigned grid_points() const { return get_unsigned("grid_points", 1024); }
  double tau_min() const { return get_real("tau_min", 0.0); }
  double tau_max() const { return get_real("tau_max", std::numbers::pi); }
  std::string format() const { return get_string("format", "csv"); }
  std::string output_path() const { return get_string("output_path", ""); }

  /// Checks the grid and format invariants. Throws UsageError.
  void validate() const {
    for (const auto& [key, value] : parameters)
      if (!is_parameter_key(key)) throw UsageError("unknown parameter '" + key + "'");
    if (grid_points() < 2) throw UsageError("grid_points must be at least 2");
    if (!(tau_min() < tau_max())) throw UsageError("tau_min must be smaller than tau_max");
    const auto fmt = format();
    if (fmt != "csv" && fmt != "json") throw UsageError("format must be csv or json");
  }
};

}  // namespace photamp::cli
