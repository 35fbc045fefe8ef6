#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "photamp/numerics.hpp"

namespace photamp {

/// |n_e; n>: n_e excited atoms (Holstein-Primakoff boson count) and n photons.
struct TwoModeFockState {
  unsigned n_e = 0;
  unsigned n = 0;

  unsigned total_quanta() const { return n_e + n; }
  friend bool operator==(const TwoModeFockState&, const TwoModeFockState&) = default;
};

/// Parameters of the resonant beam-splitter propagator. Frequencies are in units of g.
struct HpEvolutionParams {
  double tau = 0.0;
  double omega_over_g = 1.0;
  double omega0_over_g = 1.0;
  unsigned n_atoms = 1000000;
  /// Inputs with n_e + n above this fraction of n_atoms are flagged as outside the HP regime.
  double validity_fraction = 0.01;
};

/// Amplitudes over the total-quanta sector, indexed by the excited-atom count n'_e.
struct AmplitudeVector {
  unsigned total_quanta = 0;
  std::vector<std::complex<double>> amplitudes;
  bool outside_hp_regime = false;

  std::complex<double> at(unsigned n_e_prime) const { return amplitudes.at(n_e_prime); }
  double probability(unsigned n_e_prime) const { return std::norm(amplitudes.at(n_e_prime)); }
  double norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return acc;
  }
};

inline bool within_hp_regime(TwoModeFockState state, unsigned n_atoms, double fraction = 0.01) {
  return static_cast<double>(state.total_quanta()) <= fraction * static_cast<double>(n_atoms);
}

/// Evolves |n_e; n> under exp(-i tau (omega/g N_ex - omega0/(2g) N)) exp(-i tau (b^dag a + b a^dag)).
///
/// The beam-splitter factor is expanded in Wigner small-d elements with
/// j = (n_e+n)/2, m = (n_e-n)/2 and m' = (n'_e-n')/2 at angle 2 tau, each carrying
/// the phase exp(+i pi (2m' - 2m)/4). That sign is the one that reproduces the
/// matrix exponential of b^dag a + b a^dag for the standard d-matrix convention.
///
/// Only resonant parameters (omega == omega0) are accepted.
inline AmplitudeVector evolve_fock(TwoModeFockState input, const HpEvolutionParams& params) {
  if (!std::isfinite(params.tau)) throw std::domain_error("evolve_fock: tau must be finite");
  if (std::fabs(params.omega_over_g - params.omega0_over_g) >
      1e-12 * std::max(1.0, std::fabs(params.omega_over_g))) {
    throw std::invalid_argument("evolve_fock: the beam-splitter reduction requires omega == omega0");
  }

  const unsigned total = input.total_quanta();
  const auto j = HalfInteger::from_twice(static_cast<int>(total));
  const auto m = HalfInteger::from_twice(static_cast<int>(input.n_e) - static_cast<int>(input.n));

  const double global_phase_angle =
      -params.tau * (params.omega_over_g * total - 0.5 * params.omega0_over_g * params.n_atoms);
  const std::complex<double> global_phase = std::polar(1.0, global_phase_angle);

  AmplitudeVector out;
  out.total_quanta = total;
  out.outside_hp_regime = !within_hp_regime(input, params.n_atoms, params.validity_fraction);
  out.amplitudes.resize(total + 1);
  for (unsigned ne_prime = 0; ne_prime <= total; ++ne_prime) {
    const int twice_m_prime = 2 * static_cast<int>(ne_prime) - static_cast<int>(total);
    const double d = wigner_small_d(j, HalfInteger::from_twice(twice_m_prime), m, 2.0 * params.tau);
    const double phase = std::numbers::pi * (twice_m_prime - m.twice()) / 4.0;
    out.amplitudes[ne_prime] = global_phase * std::polar(1.0, phase) * d;
  }
  return out;
}

/// Probability that every atom is found in the collective ground state after
/// scaled time tau, starting from |n_e; n>:
///
///   P(n_e, n, tau) = C(n + n_e, n_e) cos^(2n)(tau) sin^(2 n_e)(tau)
///
/// Evaluated in log form. A zero base to the zeroth power counts as 1.
inline double ground_projection_probability(unsigned n_e, unsigned n, double tau) {
  const double c = std::cos(tau);
  const double s = std::sin(tau);
  if ((n > 0 && c == 0.0) || (n_e > 0 && s == 0.0)) return 0.0;
  double log_p = log_binomial(static_cast<std::uint64_t>(n) + n_e, n_e);
  if (n > 0) log_p += 2.0 * n * std::log(std::fabs(c));
  if (n_e > 0) log_p += 2.0 * n_e * std::log(std::fabs(s));
  return std::exp(log_p);
}

}  // namespace photamp
