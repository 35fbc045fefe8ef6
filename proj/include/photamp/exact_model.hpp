#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "photamp/hp_model.hpp"
#include "photamp/trace.hpp"
#include "photamp/tridiagonal_eigen.hpp"

namespace photamp {

/// States (n_e, E - n_e), n_e = 0..min(N, E), of the symmetric Dicke sector
/// S = N/2 with fixed excitation number E = a^dag a + S_z + N/2.
struct SectorBasis {
  unsigned n_atoms = 1;
  unsigned total_excitation = 0;
  std::vector<TwoModeFockState> states;

  std::size_t dim() const { return states.size(); }

  bool contains(TwoModeFockState s) const {
    return s.total_quanta() == total_excitation && s.n_e <= n_atoms;
  }
  /// Basis states are ordered by n_e, so the index is n_e itself.
  std::size_t index_of(TwoModeFockState s) const {
    if (!contains(s)) throw std::domain_error("state lies outside the excitation sector");
    return s.n_e;
  }
};

/// Real symmetric tridiagonal block of
///   H = omega a^dag a + omega0 S_z + (g / sqrt(N)) (S_+ a + S_- a^dag)
/// in a SectorBasis. off_diagonal[k] couples states k and k+1.
struct SectorHamiltonian {
  SectorBasis basis;
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;
  double coupling = 1.0;
};

inline SectorBasis make_sector_basis(unsigned n_atoms, unsigned total_excitation) {
  if (n_atoms < 1) throw std::invalid_argument("sector basis needs at least one atom");
  SectorBasis basis{n_atoms, total_excitation, {}};
  const unsigned max_excited = std::min(n_atoms, total_excitation);
  basis.states.reserve(max_excited + 1);
  for (unsigned ne = 0; ne <= max_excited; ++ne) basis.states.push_back({ne, total_excitation - ne});
  return basis;
}

inline SectorHamiltonian build_sector(unsigned n_atoms, unsigned total_excitation, double omega,
                                      double omega0, double g) {
  if (!(g > 0.0)) throw std::invalid_argument("build_sector: coupling g must be positive");
  SectorHamiltonian h;
  h.basis = make_sector_basis(n_atoms, total_excitation);
  h.coupling = g;

  const double half_n = 0.5 * n_atoms;
  const std::size_t dim = h.basis.dim();
  h.diagonal.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto& st = h.basis.states[k];
    h.diagonal[k] = omega * st.n + omega0 * (static_cast<double>(st.n_e) - half_n);
  }

  // <n_e+1, n-1| S_+ a |n_e, n> = sqrt(n) sqrt((S - M)(S + M + 1)) with S - M = N - n_e,
  // S + M + 1 = n_e + 1.
  h.off_diagonal.resize(dim - 1);
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    const auto& st = h.basis.states[k];
    const double photons = st.n;
    const double spin = static_cast<double>(n_atoms - st.n_e) * (st.n_e + 1.0);
    h.off_diagonal[k] = g * std::sqrt(photons * spin / n_atoms);
  }
  return h;
}

/// Spectral form of a sector Hamiltonian, ready for repeated propagation.
class SectorPropagator {
public:
  explicit SectorPropagator(const SectorHamiltonian& h) : basis_(h.basis), coupling_(h.coupling) {
    // A constant diagonal shift only changes the global phase; removing the mean
    // keeps eigenvalues O(g sqrt(E)) even when N/2 is large.
    shift_ = std::accumulate(h.diagonal.begin(), h.diagonal.end(), 0.0) /
             static_cast<double>(h.diagonal.size());
    std::vector<double> centred(h.diagonal);
    for (auto& v : centred) v -= shift_;
    system_ = solve_symmetric_tridiagonal(std::move(centred), h.off_diagonal);
  }

  const TridiagonalEigensystem& eigensystem() const { return system_; }
  /// Eigenvalues of the full Hamiltonian (shift restored).
  std::vector<double> eigenvalues() const {
    std::vector<double> out(system_.eigenvalues);
    for (auto& v : out) v += shift_;
    return out;
  }

  /// Sector amplitudes of exp(-i H t) |initial>, with t = tau / g.
  std::vector<std::complex<double>> amplitudes(TwoModeFockState initial, double tau) const {
    const std::size_t src = basis_.index_of(initial);
    const std::size_t dim = basis_.dim();
    const double t = tau / coupling_;
    std::vector<std::complex<double>> weights(dim);
    for (std::size_t k = 0; k < dim; ++k)
      weights[k] = std::polar(system_.vector(src, k), -system_.eigenvalues[k] * t);
    const auto global = std::polar(1.0, -shift_ * t);
    std::vector<std::complex<double>> out(dim);
    for (std::size_t row = 0; row < dim; ++row) {
      std::complex<double> acc{};
      for (std::size_t k = 0; k < dim; ++k) acc += system_.vector(row, k) * weights[k];
      out[row] = global * acc;
    }
    return out;
  }

  /// |<0; E| exp(-i H t) |initial>|^2, t = tau / g.
  double ground_projection(TwoModeFockState initial, double tau) const {
    const std::size_t src = basis_.index_of(initial);
    const double t = tau / coupling_;
    std::complex<double> acc{};
    for (std::size_t k = 0; k < basis_.dim(); ++k) {
      acc += system_.vector(0, k) * system_.vector(src, k) *
             std::polar(1.0, -system_.eigenvalues[k] * t);
    }
    return std::min(1.0, std::norm(acc));
  }

private:
  SectorBasis basis_;
  double coupling_ = 1.0;
  double shift_ = 0.0;
  TridiagonalEigensystem system_;
};

/// Ground-projection probability of the exact model on a grid of scaled times.
inline ProbabilityTrace exact_projection_probability(const SectorHamiltonian& h,
                                                     TwoModeFockState initial,
                                                     std::span<const double> tau_grid) {
  if (!h.basis.contains(initial))
    throw std::domain_error("exact_projection_probability: initial state outside the sector");
  const SectorPropagator propagator(h);
  ProbabilityTrace trace;
  trace.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  trace.values.reserve(tau_grid.size());
  for (double tau : tau_grid) trace.values.push_back(propagator.ground_projection(initial, tau));
  trace.meta.model = "exact";
  trace.meta.params = {{"N", h.basis.n_atoms},
                       {"n_e", initial.n_e},
                       {"n", initial.n},
                       {"g", h.coupling}};
  return trace;
}

/// Largest |exact - closed-form HP| ground-projection probability over the grid,
/// for the resonant model with omega = omega0 = g = 1.
inline double hp_deviation(unsigned n_atoms, unsigned n_e, unsigned n,
                           std::span<const double> tau_grid) {
  const auto h = build_sector(n_atoms, n_e + n, 1.0, 1.0, 1.0);
  const auto exact = exact_projection_probability(h, {n_e, n}, tau_grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    worst = std::max(worst, std::fabs(exact.values[i] - ground_projection_probability(n_e, n, tau_grid[i])));
  }
  return worst;
}

}  // namespace photamp
