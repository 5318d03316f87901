#pragma once

#include <complex>
#include <vector>

namespace superlattice::special {

// Tolerance used whenever a real exponent must be classified as an integer.
inline constexpr double kIntegerTolerance = 1e-12;

[[nodiscard]] bool is_integer(double s, double tol = kIntegerTolerance) noexcept;
[[nodiscard]] bool is_even_integer(double s, double tol = kIntegerTolerance) noexcept;

// Riemann zeta for s > 1 (absolute error below 1e-12). Throws DomainError otherwise.
[[nodiscard]] double zeta(double s);

// Riemann zeta on the whole real line except the pole at s = 1, via
// Euler-Maclaurin for s >= 1/2 and the functional equation below that.
[[nodiscard]] double zeta_continued(double s);

// Sum_{k >= first} k^{-a} for a > 1 and integer first >= 1.
[[nodiscard]] double power_tail_sum(double a, long long first);

/// Li_s(e^{ip}) for real order s > 1, evaluated through the expansion
///   Gamma(1-s)(-ip)^{s-1} + sum_n zeta(s-n) (ip)^n / n!
/// (with the H_{s-1} - Log(-ip) variant for integer s). Angles beyond pi are
/// reflected through Li_s(conj z) = conj Li_s(z) so the series ratio stays
/// below 1/2. Coefficients are computed once per order.
class CirclePolylog {
 public:
  explicit CirclePolylog(double s);

  [[nodiscard]] double order() const noexcept { return s_; }

  // p in [0, 2pi]; p = 0 and p = 2pi return zeta(s).
  [[nodiscard]] std::complex<double> operator()(double p) const;

 private:
  [[nodiscard]] std::complex<double> eval_upper_half(double p) const;

  double s_;
  bool integer_order_;
  int integer_value_ = 0;
  double gamma_one_minus_s_ = 0.0;  // non-integer orders only
  double harmonic_ = 0.0;           // H_{s-1}, integer orders only
  double log_term_scale_ = 0.0;     // 1/(s-1)!, integer orders only
  std::vector<double> coefficients_;  // zeta(s-n)/n!
};

// Li_s(e^{ip}) for s > 1 and p strictly inside (0, 2pi).
[[nodiscard]] std::complex<double> polylog_circle(double s, double p);

// g_s(p) = 2 sin p Im Li_s(e^{ip}), extended evenly to [-pi, pi].
[[nodiscard]] double g(double s, double p);

// Stable-law coefficient C_s = -2 pi / (Gamma(s) sin(s pi / 2)), zero for even s.
[[nodiscard]] double c_coefficient(double s);

}  // namespace superlattice::special
