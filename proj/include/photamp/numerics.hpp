#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace photamp {

/// Raised when (j, m', m) is not a valid set of rotation-matrix indices.
class IndexDomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A half-integer stored as twice its value, so 3/2 is held as 3.
class HalfInteger {
public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_integer(int value) { return HalfInteger(2 * value); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice_ + b.twice_);
  }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) {
    return HalfInteger(a.twice_ - b.twice_);
  }
  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

  std::string to_string() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

namespace detail {

inline constexpr std::size_t kLogFactorialTableSize = 512;

// ln(k!) for small k by running sums in extended precision.
inline const std::array<long double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<long double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    for (std::size_t k = 1; k < t.size(); ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = acc;
    }
    return t;
  }();
  return table;
}

/// Neumaier's variant of Kahan summation, in extended precision.
class CompensatedSum {
public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + carry_; }

private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

}  // namespace detail

/// ln(k!) in extended precision. Table lookup below 512, lgamma above.
inline long double log_factorial_ld(std::uint64_t k) {
  const auto& table = detail::log_factorial_table();
  if (k < table.size()) return table[k];
  int sign = 0;
  return ::lgammal_r(static_cast<long double>(k) + 1.0L, &sign);
}

inline double log_factorial(std::uint64_t k) { return static_cast<double>(log_factorial_ld(k)); }

/// ln C(n, k). Requires k <= n.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::domain_error("log_binomial: k > n");
  return static_cast<double>(log_factorial_ld(n) - log_factorial_ld(k) - log_factorial_ld(n - k));
}

/// Throws IndexDomainError unless |m|, |m'| <= j and j - m, j - m' are integers.
inline void check_rotation_indices(HalfInteger j, HalfInteger m_prime, HalfInteger m) {
  const int j2 = j.twice();
  const bool ok = j2 >= 0 && std::abs(m.twice()) <= j2 && std::abs(m_prime.twice()) <= j2 &&
                  (j2 - m.twice()) % 2 == 0 && (j2 - m_prime.twice()) % 2 == 0;
  if (!ok) {
    throw IndexDomainError("invalid rotation indices j=" + j.to_string() +
                           " m'=" + m_prime.to_string() + " m=" + m.to_string());
  }
}

/// Wigner small-d element d^j_{m',m}(beta), the matrix element of exp(-i beta J_y).
///
/// Evaluates the closed-form alternating sum over k
///
///   sqrt((j+m)!(j-m)!(j+m')!(j-m')!) / ((j+m-k)! k! (j-k-m')! (k-m+m')!)
///     * (-1)^(k-m+m') cos^(2j-2k+m-m')(beta/2) sin^(2k-m+m')(beta/2)
///
/// with k restricted to values where no factorial argument is negative. Each
/// term is formed as (log magnitude, sign) and accumulated with compensated
/// summation in extended precision; terms reach ~1e6 at j = 25 while the
/// result is bounded by 1.
///
/// A zero base raised to the zeroth power is taken as 1.
inline double wigner_small_d(HalfInteger j, HalfInteger m_prime, HalfInteger m, double beta) {
  check_rotation_indices(j, m_prime, m);
  if (!std::isfinite(beta)) throw std::domain_error("wigner_small_d: beta must be finite");

  const std::int64_t j_plus_m = (j.twice() + m.twice()) / 2;
  const std::int64_t j_minus_m = (j.twice() - m.twice()) / 2;
  const std::int64_t j_plus_mp = (j.twice() + m_prime.twice()) / 2;
  const std::int64_t j_minus_mp = (j.twice() - m_prime.twice()) / 2;
  const std::int64_t m_minus_mp = (m.twice() - m_prime.twice()) / 2;

  const std::int64_t k_min = std::max<std::int64_t>(0, m_minus_mp);
  const std::int64_t k_max = std::min(j_plus_m, j_minus_mp);

  const long double half = static_cast<long double>(beta) / 2.0L;
  const long double c = std::cos(half);
  const long double s = std::sin(half);
  const long double log_c = c != 0.0L ? std::log(std::fabs(c)) : 0.0L;
  const long double log_s = s != 0.0L ? std::log(std::fabs(s)) : 0.0L;

  // Sorted summation; d(m', m, beta) == d(m, m', -beta) holds bit for bit.
  const auto sorted_log_factorials = [](std::array<std::int64_t, 4> args) {
    std::sort(args.begin(), args.end());
    long double acc = 0.0L;
    for (std::int64_t a : args) acc += log_factorial_ld(static_cast<std::uint64_t>(a));
    return acc;
  };

  const long double log_prefactor = 0.5L * sorted_log_factorials({j_plus_m, j_minus_m, j_plus_mp, j_minus_mp});

  detail::CompensatedSum sum;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const std::int64_t cos_power = j_plus_m + j_minus_mp - 2 * k;
    const std::int64_t sin_power = 2 * k - m_minus_mp;
    if ((cos_power > 0 && c == 0.0L) || (sin_power > 0 && s == 0.0L)) continue;

    long double log_mag =
        log_prefactor - sorted_log_factorials({j_plus_m - k, k, j_minus_mp - k, k - m_minus_mp});
    if (cos_power > 0) log_mag += static_cast<long double>(cos_power) * log_c;
    if (sin_power > 0) log_mag += static_cast<long double>(sin_power) * log_s;

    bool negative = ((k - m_minus_mp) % 2) != 0;
    if (c < 0.0L && cos_power % 2 != 0) negative = !negative;
    if (s < 0.0L && sin_power % 2 != 0) negative = !negative;

    const long double term = std::exp(log_mag);
    sum.add(negative ? -term : term);
  }
  return static_cast<double>(sum.value());
}

}  // namespace photamp
