#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "photamp/cli/output.hpp"
#include "photamp/cli/run_config.hpp"
#include "photamp/ensembles.hpp"
#include "photamp/exact_model.hpp"
#include "photamp/hp_model.hpp"
#include "photamp/numerics.hpp"

namespace photamp::cli {

/// Deviations at or below this level count as exact agreement in exact-compare.
inline constexpr double kDeviationFloor = 1e-12;

/// Fills in the defaults each command uses so the effective configuration is explicit.
inline RunConfig resolve_defaults(RunConfig config) {
  std::map<std::string, std::string> defaults{
      {"grid_points", "1024"}, {"tau_min", "0"}, {"tau_max", "pi"}, {"format", "csv"}};
  switch (config.command) {
    case Command::fig1:
      defaults.insert({{"n_e", "1,10,25"}, {"n", "0,1,5,10"}});
      break;
    case Command::fig2:
      defaults.insert({{"n_e", "1,10,25"}, {"intensity", "0.1,0.5,0.9"}});
      break;
    case Command::fig3:
      defaults.insert({{"n_e", "25"}, {"intensity", "0.1,0.5"}});
      break;
    case Command::wigner:
      break;
    case Command::exact_compare:
      defaults.insert({{"N", "500,1000,2000,4000"}, {"n_e", "3"}, {"n", "2"}});
      break;
    case Command::discriminate:
      defaults.insert({{"n_e", "10"}, {"n_max", "10"}});
      break;
    case Command::sweep:
      defaults.insert({{"n_e", "1,10,25"}, {"n", "0,1,5,10"}, {"epsilon", "0.01"}});
      break;
  }
  for (auto& [k, v] : defaults) config.parameters.try_emplace(k, v);
  return config;
}

/// Index of the first pair (i-1, i) where the deviation fails to drop strictly,
/// or 0 when the sequence is monotone. Pairs both at the floor count as decreasing.
inline std::size_t first_non_decreasing_step(const std::vector<double>& deviations) {
  for (std::size_t i = 1; i < deviations.size(); ++i) {
    const bool at_floor = deviations[i] <= kDeviationFloor && deviations[i - 1] <= kDeviationFloor;
    if (!(deviations[i] < deviations[i - 1]) && !at_floor) return i;
  }
  return 0;
}

namespace detail {

inline std::vector<double> grid_of(const RunConfig& config) {
  return linspace(config.tau_min(), config.tau_max(), config.grid_points());
}

inline std::vector<unsigned> nonempty_unsigned_list(const RunConfig& config, const std::string& key) {
  auto list = config.get_unsigned_list(key, {});
  if (list.empty()) throw UsageError("parameter '" + key + "' needs at least one value");
  return list;
}

inline std::vector<double> nonempty_real_list(const RunConfig& config, const std::string& key) {
  auto list = config.get_real_list(key, {});
  if (list.empty()) throw UsageError("parameter '" + key + "' needs at least one value");
  for (double v : list)
    if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("parameter '" + key + "' must be non-negative");
  return list;
}

inline unsigned single_unsigned(const RunConfig& config, const std::string& key) {
  auto list = nonempty_unsigned_list(config, key);
  if (list.size() != 1) throw UsageError("parameter '" + key + "' takes a single value");
  return list.front();
}

inline nlohmann::ordered_json peak_summary(const ProbabilityTrace& trace) {
  const auto peak = find_peak(trace);
  return {{"peak_tau", peak.tau}, {"peak_value", peak.value}};
}

inline ProbabilityTrace fock_trace(unsigned n_e, unsigned n, const std::vector<double>& grid) {
  ProbabilityTrace trace;
  trace.tau_grid = grid;
  trace.values.reserve(grid.size());
  for (double tau : grid) trace.values.push_back(ground_projection_probability(n_e, n, tau));
  trace.meta.model = "hp";
  trace.meta.params = {{"n_e", n_e}, {"n", n}};
  return trace;
}

inline void note_regime(CommandResult& result, const CoherentInput& input) {
  if (input.out_of_regime())
    result.warnings.push_back("intensity " + format_label_number(input.intensity()) +
                              " is outside the low-intensity regime |alpha|^2 < 1");
}

}  // namespace detail

/// Ground-projection probability for Fock inputs: one column per (n_e, n).
inline CommandResult run_fig1(const RunConfig& config) {
  const auto grid = detail::grid_of(config);
  const auto ne_list = detail::nonempty_unsigned_list(config, "n_e");
  const auto n_list = detail::nonempty_unsigned_list(config, "n");
  CommandResult result;
  result.table.key = grid;
  for (unsigned ne : ne_list) {
    for (unsigned n : n_list) {
      const auto trace = detail::fock_trace(ne, n, grid);
      const std::string label = "p_ne" + std::to_string(ne) + "_n" + std::to_string(n);
      auto s = detail::peak_summary(trace);
      if (ne > 0 || n == 0) s["perception_time"] = perception_time(ne, n);
      result.summary[label] = s;
      result.table.add(label, trace.values);
    }
  }
  return result;
}

/// Coherent-radiation input: one column per (n_e, |alpha|^2).
inline CommandResult run_fig2(const RunConfig& config) {
  const auto grid = detail::grid_of(config);
  const auto ne_list = detail::nonempty_unsigned_list(config, "n_e");
  const auto intensities = detail::nonempty_real_list(config, "intensity");
  CommandResult result;
  result.table.key = grid;
  for (double intensity : intensities) {
    const auto input = CoherentInput::from_intensity(intensity);
    detail::note_regime(result, input);
    for (unsigned ne : ne_list) {
      const auto trace = coherent_projection_probability(ne, input, grid);
      const std::string label = "p_ne" + std::to_string(ne) + "_a2_" + format_label_number(intensity);
      auto s = detail::peak_summary(trace);
      s["truncation_nmax"] = input.truncation_nmax();
      result.summary[label] = s;
      result.table.add(label, trace.values);
    }
  }
  return result;
}

/// Pure |n_e> versus uniform mixture over 0..n_e, paired per intensity.
inline CommandResult run_fig3(const RunConfig& config) {
  const auto grid = detail::grid_of(config);
  const unsigned ne = detail::single_unsigned(config, "n_e");
  const auto intensities = detail::nonempty_real_list(config, "intensity");
  CommandResult result;
  result.table.key = grid;
  for (double intensity : intensities) {
    const auto input = CoherentInput::from_intensity(intensity);
    detail::note_regime(result, input);
    const auto pure = coherent_projection_probability(ne, input, grid);
    const auto mixed = mixed_projection_probability(AtomicMixture{ne}, input, grid);
    const std::string tag = "a2_" + format_label_number(intensity);
    const auto pure_peak = find_peak(pure);
    const auto mixed_peak = find_peak(mixed);
    result.summary[tag] = {
        {"pure_peak_tau", pure_peak.tau},   {"pure_peak_value", pure_peak.value},
        {"mixed_peak_tau", mixed_peak.tau}, {"mixed_peak_value", mixed_peak.value},
        {"pure_fwhm", full_width_half_maximum(pure)},
        {"mixed_fwhm", full_width_half_maximum(mixed)},
        {"mixed_background", mixed.values.front()},
    };
    result.table.add("p_pure_" + tag, pure.values);
    result.table.add("p_mixed_" + tag, mixed.values);
  }
  return result;
}

/// d^j_{m',m}(2 tau) on the tau grid.
inline CommandResult run_wigner(const RunConfig& config) {
  const auto j = config.require_half_integer("j");
  const auto mp = config.require_half_integer("m_prime");
  const auto m = config.require_half_integer("m");
  try {
    check_rotation_indices(j, mp, m);
  } catch (const IndexDomainError& e) {
    throw UsageError(e.what());
  }
  const auto grid = detail::grid_of(config);
  CommandResult result;
  result.table.key = grid;
  std::vector<double> values;
  values.reserve(grid.size());
  for (double tau : grid) values.push_back(wigner_small_d(j, mp, m, 2.0 * tau));
  result.table.add("d", std::move(values));
  result.summary = {{"j", j.to_string()}, {"m_prime", mp.to_string()}, {"m", m.to_string()}};
  return result;
}

/// Exact sector model against the closed form, one exact column per N.
/// Fails validation unless the max deviation decreases strictly with N
/// (pairs already at the deviation floor are accepted).
inline CommandResult run_exact_compare(const RunConfig& config) {
  const auto grid = detail::grid_of(config);
  auto n_atoms = detail::nonempty_unsigned_list(config, "N");
  const unsigned ne = detail::single_unsigned(config, "n_e");
  const unsigned n = detail::single_unsigned(config, "n");
  for (unsigned N : n_atoms)
    if (N == 0) throw UsageError("N must be positive");
  std::sort(n_atoms.begin(), n_atoms.end());
  n_atoms.erase(std::unique(n_atoms.begin(), n_atoms.end()), n_atoms.end());

  CommandResult result;
  result.table.key = grid;
  result.table.add("p_hp", detail::fock_trace(ne, n, grid).values);

  nlohmann::ordered_json deviations = nlohmann::ordered_json::object();
  std::vector<double> devs;
  for (unsigned N : n_atoms) {
    const auto h = build_sector(N, ne + n, 1.0, 1.0, 1.0);
    const auto trace = exact_projection_probability(h, {ne, n}, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::fabs(trace.values[i] - result.table.series.front().second[i]));
    devs.push_back(worst);
    deviations[std::to_string(N)] = worst;
    result.table.add("p_exact_N" + std::to_string(N), trace.values);
  }

  const std::size_t bad_step = first_non_decreasing_step(devs);
  const bool monotone = bad_step == 0;
  if (!monotone) {
    result.diagnostic = "deviation does not decrease from N=" + std::to_string(n_atoms[bad_step - 1]) +
                        " to N=" + std::to_string(n_atoms[bad_step]);
  }
  result.summary = {{"max_deviation", deviations},
                    {"overall_max_deviation", devs.empty() ? 0.0 : *std::max_element(devs.begin(), devs.end())},
                    {"monotone", monotone}};
  if (!monotone) result.exit_code = kValidation;
  return result;
}

/// Nearest-peak classification of an observed perception time.
inline CommandResult run_discriminate(const RunConfig& config) {
  const unsigned ne = detail::single_unsigned(config, "n_e");
  const double observed = config.require_real("observed");
  const unsigned n_max = config.get_unsigned("n_max", 10);
  if (ne == 0 && n_max > 0) throw UsageError("discriminate needs n_e >= 1");
  const auto report = discriminate_photon_number(ne, observed, n_max);

  CommandResult result;
  result.table.key = report.candidate_peak_times;
  std::vector<double> ns(n_max + 1);
  for (unsigned k = 0; k <= n_max; ++k) ns[k] = k;
  result.table.add("n", std::move(ns));
  result.table.add("distance", report.distances);
  result.summary = {{"observed_peak_time", observed}, {"inferred_n", report.inferred_n}};
  return result;
}

/// Perception time, peak probability and threshold time over (n_e, n) pairs.
inline CommandResult run_sweep(const RunConfig& config) {
  const auto ne_list = detail::nonempty_unsigned_list(config, "n_e");
  const auto n_list = detail::nonempty_unsigned_list(config, "n");
  const double epsilon = config.get_real("epsilon", 0.01);
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");

  CommandResult result;
  std::vector<double> col_ne, col_n, col_peak, col_threshold;
  for (unsigned ne : ne_list) {
    for (unsigned n : n_list) {
      if (ne == 0 && n > 0) throw UsageError("sweep needs n_e >= 1 when n > 0");
      const double tp = perception_time(ne, n);
      double threshold = std::numeric_limits<double>::quiet_NaN();
      try {
        threshold = threshold_time(ne, n, epsilon);
      } catch (const NoThresholdError&) {
        result.warnings.push_back("no threshold for n_e=" + std::to_string(ne) + ", n=" + std::to_string(n));
      }
      result.table.key.push_back(tp);
      col_ne.push_back(ne);
      col_n.push_back(n);
      col_peak.push_back(ground_projection_probability(ne, n, tp));
      col_threshold.push_back(threshold);
    }
  }
  result.table.add("n_e", std::move(col_ne));
  result.table.add("n", std::move(col_n));
  result.table.add("p_peak", std::move(col_peak));
  result.table.add("tau_threshold", std::move(col_threshold));
  result.summary = {{"epsilon", epsilon}, {"rows", result.table.key.size()}};
  return result;
}

inline CommandResult run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::fig1: return run_fig1(config);
    case Command::fig2: return run_fig2(config);
    case Command::fig3: return run_fig3(config);
    case Command::wigner: return run_wigner(config);
    case Command::exact_compare: return run_exact_compare(config);
    case Command::discriminate: return run_discriminate(config);
    case Command::sweep: return run_sweep(config);
  }
  throw UsageError("unknown command");
}

/// Validates, runs and writes one command. Returns the process exit code.
inline int execute(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = resolve_defaults(raw);
    config.validate();
    const CommandResult result = run_command(config);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    std::ostringstream buffer;
    if (config.format() == "json")
      write_json(buffer, config, result);
    else
      write_csv(buffer, result.table);

    const auto path = config.output_path();
    if (path.empty() || path == "-") {
      out << buffer.str();
      out.flush();
      if (!out) throw IoError("failed writing to standard output");
    } else {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw IoError("cannot open output file '" + path + "'");
      file << buffer.str();
      file.close();
      if (!file) throw IoError("failed writing output file '" + path + "'");
    }
    if (!result.diagnostic.empty()) err << "validation: " << result.diagnostic << '\n';
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace photamp::cli
