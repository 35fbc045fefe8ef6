#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace photamp {

/// Describes what produced a ProbabilityTrace: the model and its inputs.
struct TraceMeta {
  std::string model;  // "hp", "exact", "coherent", "mixed"
  std::map<std::string, double> params;
};

/// Probability values sampled on an ascending grid of scaled times.
struct ProbabilityTrace {
  std::vector<double> tau_grid;
  std::vector<double> values;
  TraceMeta meta;

  std::size_t size() const { return values.size(); }
};

/// `count` evenly spaced points on [first, last], endpoints included.
inline std::vector<double> linspace(double first, double last, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> out(count);
  const double step = (last - first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = first + step * static_cast<double>(i);
  out.back() = last;
  return out;
}

}  // namespace photamp
