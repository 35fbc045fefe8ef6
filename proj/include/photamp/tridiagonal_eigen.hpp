#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace photamp {

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
/// Eigenvalues ascend; column i of the (row-major) vector matrix pairs with eigenvalues[i].
struct TridiagonalEigensystem {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;

  std::size_t dim() const { return eigenvalues.size(); }
  double vector(std::size_t row, std::size_t col) const { return eigenvectors[row * dim() + col]; }
};

/// Implicit-shift QL with Wilkinson shifts. `off_diagonal[i]` couples rows i and i+1.
inline TridiagonalEigensystem solve_symmetric_tridiagonal(std::vector<double> diagonal,
                                                          std::vector<double> off_diagonal) {
  const std::size_t n = diagonal.size();
  if (n == 0) return {};
  if (off_diagonal.size() + 1 != n)
    throw std::invalid_argument("solve_symmetric_tridiagonal: off-diagonal must have length n-1");

  std::vector<double>& d = diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(off_diagonal.begin(), off_diagonal.end(), e.begin());

  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  constexpr int kMaxIterations = 64;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto sn = static_cast<std::ptrdiff_t>(n);

  for (std::ptrdiff_t l = 0; l < sn; ++l) {
    int iterations = 0;
    std::ptrdiff_t m = l;
    do {
      for (m = l; m < sn - 1; ++m) {
        const double scale = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * scale) break;
      }
      if (m == l) break;
      if (++iterations > kMaxIterations)
        throw std::runtime_error("solve_symmetric_tridiagonal: QL iteration did not converge");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::ptrdiff_t i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (std::size_t k = 0; k < n; ++k) {
          f = z[k * n + i + 1];
          z[k * n + i + 1] = s * z[k * n + i] + c * f;
          z[k * n + i] = c * z[k * n + i] - s * f;
        }
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigensystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t col = 0; col < n; ++col) {
    out.eigenvalues[col] = d[order[col]];
    for (std::size_t row = 0; row < n; ++row) out.eigenvectors[row * n + col] = z[row * n + order[col]];
  }
  return out;
}

}  // namespace photamp
