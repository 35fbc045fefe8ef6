#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photamp/hp_model.hpp"
#include "photamp/numerics.hpp"
#include "photamp/trace.hpp"

namespace photamp {

/// Conditional quantity requested where the conditioning event has probability zero.
class UndefinedConditionalError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Threshold level above the peak detection probability.
class NoThresholdError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline constexpr double kPoissonTailTolerance = 1e-12;

/// Poisson probability e^{-mean} mean^n / n!.
inline double poisson_weight(double mean, unsigned n) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mean + n * std::log(mean) - log_factorial(n));
}

/// Poisson mass strictly above `nmax`, summed term by term.
inline double poisson_tail(double mean, unsigned nmax) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (unsigned n = nmax + 1;; ++n) {
    const double w = poisson_weight(mean, n);
    tail += w;
    if (n > mean && w <= 1e-18 * tail) break;
    if (n > nmax + 100000) break;
  }
  return tail;
}

/// Single-mode coherent radiation |alpha>, represented by its Poisson photon statistics
/// truncated at `truncation_nmax()`.
class CoherentInput {
public:
  /// Picks the smallest truncation whose Poisson tail is below the tolerance.
  static CoherentInput from_intensity(double intensity, double tail_tolerance = kPoissonTailTolerance) {
    check_intensity(intensity);
    unsigned nmax = std::max(1u, static_cast<unsigned>(std::floor(intensity)));
    while (poisson_tail(intensity, nmax) >= tail_tolerance) ++nmax;
    return CoherentInput(intensity, nmax);
  }

  /// Explicit truncation; rejected when the discarded tail is not below 1e-12.
  CoherentInput(double intensity, unsigned truncation_nmax)
      : intensity_(intensity), nmax_(truncation_nmax) {
    check_intensity(intensity);
    if (truncation_nmax < 1) throw std::invalid_argument("CoherentInput: truncation must be positive");
    if (poisson_tail(intensity, truncation_nmax) >= kPoissonTailTolerance)
      throw std::invalid_argument("CoherentInput: truncation leaves a Poisson tail above 1e-12");
  }

  double intensity() const { return intensity_; }
  unsigned truncation_nmax() const { return nmax_; }
  /// The low-intensity regime is |alpha|^2 < 1.
  bool out_of_regime() const { return intensity_ >= 1.0; }

  std::vector<double> photon_weights() const {
    std::vector<double> w(nmax_ + 1);
    for (unsigned n = 0; n <= nmax_; ++n) w[n] = poisson_weight(intensity_, n);
    return w;
  }

private:
  static void check_intensity(double intensity) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
      throw std::invalid_argument("CoherentInput: intensity must be finite and non-negative");
  }

  double intensity_ = 0.0;
  unsigned nmax_ = 1;
};

/// Uniform mixture (1/(n_e_max+1)) sum_{m=0}^{n_e_max} |m><m| of low-lying Dicke states.
struct AtomicMixture {
  unsigned n_e_max = 0;

  double weight() const { return 1.0 / (n_e_max + 1.0); }
  unsigned components() const { return n_e_max + 1; }
};

/// e^{-|alpha|^2} sum_n P(n_e, n, tau) |alpha|^{2n} / n!, truncated.
inline double coherent_probability(unsigned n_e, const CoherentInput& input, double tau) {
  const auto weights = input.photon_weights();
  detail::CompensatedSum acc;
  for (unsigned n = 0; n < weights.size(); ++n)
    acc.add(weights[n] * ground_projection_probability(n_e, n, tau));
  return static_cast<double>(acc.value());
}

inline double mixed_probability(AtomicMixture mix, const CoherentInput& input, double tau) {
  const auto weights = input.photon_weights();
  detail::CompensatedSum acc;
  for (unsigned m = 0; m <= mix.n_e_max; ++m)
    for (unsigned n = 0; n < weights.size(); ++n)
      acc.add(weights[n] * ground_projection_probability(m, n, tau));
  return static_cast<double>(acc.value()) * mix.weight();
}

inline ProbabilityTrace coherent_projection_probability(unsigned n_e, const CoherentInput& input,
                                                        std::span<const double> tau_grid) {
  ProbabilityTrace trace;
  trace.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  trace.values.reserve(tau_grid.size());
  for (double tau : tau_grid) trace.values.push_back(coherent_probability(n_e, input, tau));
  trace.meta.model = "coherent";
  trace.meta.params = {{"n_e", n_e},
                       {"intensity", input.intensity()},
                       {"truncation_nmax", input.truncation_nmax()}};
  return trace;
}

inline ProbabilityTrace mixed_projection_probability(AtomicMixture mix, const CoherentInput& input,
                                                     std::span<const double> tau_grid) {
  ProbabilityTrace trace;
  trace.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  trace.values.reserve(tau_grid.size());
  for (double tau : tau_grid) trace.values.push_back(mixed_probability(mix, input, tau));
  trace.meta.model = "mixed";
  trace.meta.params = {{"n_e_max", mix.n_e_max},
                       {"intensity", input.intensity()},
                       {"truncation_nmax", input.truncation_nmax()}};
  return trace;
}

namespace detail {

inline double conditional_gain(double weighted_count, double total_weight, double intensity) {
  if (!(total_weight > 0.0))
    throw UndefinedConditionalError("intensity_gain: ground projection has zero probability at this tau");
  return weighted_count / (total_weight * intensity);
}

inline void require_positive_intensity(const CoherentInput& input) {
  if (!(input.intensity() > 0.0)) throw std::invalid_argument("intensity_gain: intensity must be positive");
}

}  // namespace detail

/// Mean photon number after a successful ground projection, divided by |alpha|^2.
/// The projection maps |n_e; n> to |0; n + n_e>.
inline double intensity_gain(unsigned n_e, const CoherentInput& input, double tau) {
  detail::require_positive_intensity(input);
  const auto weights = input.photon_weights();
  detail::CompensatedSum total, count;
  for (unsigned n = 0; n < weights.size(); ++n) {
    const double w = weights[n] * ground_projection_probability(n_e, n, tau);
    total.add(w);
    count.add(w * (static_cast<double>(n) + n_e));
  }
  return detail::conditional_gain(static_cast<double>(count.value()),
                                  static_cast<double>(total.value()), input.intensity());
}

inline double intensity_gain(AtomicMixture mix, const CoherentInput& input, double tau) {
  detail::require_positive_intensity(input);
  const auto weights = input.photon_weights();
  detail::CompensatedSum total, count;
  for (unsigned m = 0; m <= mix.n_e_max; ++m) {
    for (unsigned n = 0; n < weights.size(); ++n) {
      const double w = weights[n] * ground_projection_probability(m, n, tau);
      total.add(w);
      count.add(w * (static_cast<double>(n) + m));
    }
  }
  return detail::conditional_gain(static_cast<double>(count.value()),
                                  static_cast<double>(total.value()), input.intensity());
}

/// Scaled time of maximal detection probability, arccos sqrt(n / (n + n_e)).
/// (0, 0) returns pi/2 since P is identically 1 there.
inline double perception_time(unsigned n_e, unsigned n) {
  if (n_e == 0 && n > 0)
    throw std::domain_error("perception_time: needs at least one excited atom when photons are present");
  if (n_e == 0) return std::numbers::pi / 2.0;
  return std::acos(std::sqrt(static_cast<double>(n) / (static_cast<double>(n) + n_e)));
}

/// First tau in (0, pi/2] where P(n_e, n, tau) reaches `epsilon`.
inline double threshold_time(unsigned n_e, unsigned n, double epsilon = 0.01) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("threshold_time: epsilon must be positive");
  const double peak_time = perception_time(n_e, n);
  const double peak = ground_projection_probability(n_e, n, peak_time);
  if (epsilon > peak)
    throw NoThresholdError("threshold_time: epsilon " + std::to_string(epsilon) +
                           " exceeds the peak probability " + std::to_string(peak));
  if (n_e == 0) return 0.0;

  // P rises monotonically on (0, peak_time), so the first coarse crossing brackets the root.
  constexpr int kCoarse = 64;
  double lo = 0.0;
  double hi = peak_time;
  for (int i = 1; i <= kCoarse; ++i) {
    const double tau = peak_time * i / kCoarse;
    if (ground_projection_probability(n_e, n, tau) >= epsilon) {
      hi = tau;
      break;
    }
    lo = tau;
  }
  for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (ground_projection_probability(n_e, n, mid) >= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct DiscriminationReport {
  unsigned inferred_n = 0;
  std::vector<double> candidate_peak_times;  // index n -> tau_n
  std::vector<double> distances;             // |observed - tau_n|
};

/// Nearest-peak-time classifier over n = 0..n_max. Ties go to the smaller n.
inline DiscriminationReport discriminate_photon_number(unsigned n_e, double observed_peak_time,
                                                       unsigned n_max) {
  if (!std::isfinite(observed_peak_time))
    throw std::domain_error("discriminate_photon_number: observed peak time must be finite");
  DiscriminationReport report;
  report.candidate_peak_times.reserve(n_max + 1);
  report.distances.reserve(n_max + 1);
  double best = std::numeric_limits<double>::infinity();
  for (unsigned n = 0; n <= n_max; ++n) {
    const double tau_n = perception_time(n_e, n);
    const double dist = std::fabs(observed_peak_time - tau_n);
    report.candidate_peak_times.push_back(tau_n);
    report.distances.push_back(dist);
    if (dist < best) {
      best = dist;
      report.inferred_n = n;
    }
  }
  return report;
}

struct TracePeak {
  std::size_t index = 0;
  double tau = 0.0;
  double value = 0.0;
};

/// First grid point attaining the maximum value.
inline TracePeak find_peak(const ProbabilityTrace& trace) {
  if (trace.values.empty()) throw std::invalid_argument("find_peak: empty trace");
  const auto it = std::max_element(trace.values.begin(), trace.values.end());
  const auto idx = static_cast<std::size_t>(std::distance(trace.values.begin(), it));
  return {idx, trace.tau_grid[idx], *it};
}

/// Full width at half maximum of the peak containing the global maximum, with
/// crossings located by linear interpolation between grid points. A side that
/// never drops below half maximum extends to the grid edge.
inline double full_width_half_maximum(const ProbabilityTrace& trace) {
  const auto peak = find_peak(trace);
  const double half = 0.5 * peak.value;
  const auto& x = trace.tau_grid;
  const auto& y = trace.values;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (half - y[inside]) / (y[outside] - y[inside]);
    return x[inside] + t * (x[outside] - x[inside]);
  };

  double left = x.front();
  for (std::size_t i = peak.index; i > 0; --i) {
    if (y[i - 1] < half) {
      left = crossing(i, i - 1);
      break;
    }
  }
  double right = x.back();
  for (std::size_t i = peak.index; i + 1 < y.size(); ++i) {
    if (y[i + 1] < half) {
      right = crossing(i, i + 1);
      break;
    }
  }
  return right - left;
}

}  // namespace photamp
