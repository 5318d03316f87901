#include "superlattice/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "superlattice/errors.hpp"

namespace superlattice::special {
namespace {

using std::numbers::pi;

// B_{2j} / (2j)!, j = 1..6.
constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
};

constexpr int kZetaPartialTerms = 100;
constexpr int kZetaCorrections = 4;
constexpr int kPolylogMaxTerms = 200;

// sin(pi x / 2) with the argument reduced exactly first.
double sin_half_pi(double x) {
  const double r = std::fmod(x, 4.0);
  return std::sin(0.5 * pi * r);
}

// Euler-Maclaurin tail sum_{k >= m} k^{-a}; valid for a != 1 when m is large.
double euler_maclaurin_tail(double a, double m, int corrections) {
  const double m_pow = std::pow(m, -a);
  double total = m * m_pow / (a - 1.0) + 0.5 * m_pow;
  double rising = a;  // a (a+1) ... (a+2j-2)
  double m_power = m_pow / m;
  for (int j = 0; j < corrections; ++j) {
    total += kBernoulliOverFactorial[static_cast<std::size_t>(j)] * rising * m_power;
    rising *= (a + 2.0 * j + 1.0) * (a + 2.0 * j + 2.0);
    m_power /= m * m;
  }
  return total;
}

double zeta_euler_maclaurin(double s) {
  double partial = 0.0;
  for (int k = kZetaPartialTerms - 1; k >= 1; --k) partial += std::pow(static_cast<double>(k), -s);
  return partial + euler_maclaurin_tail(s, kZetaPartialTerms, kZetaCorrections);
}

// zeta(s - n) / n!, computed in log space on the reflected side so that the
// growth of Gamma(1 - s + n) cancels against n! before exponentiation.
double zeta_over_factorial(double s, int n) {
  const double sigma = s - n;
  const double log_factorial = std::lgamma(n + 1.0);
  if (sigma >= 0.5 || sigma == 0.0) return zeta_continued(sigma) * std::exp(-log_factorial);
  if (is_even_integer(sigma, 0.0)) return 0.0;
  const double magnitude = std::exp(sigma * std::log(2.0) + (sigma - 1.0) * std::log(pi) +
                                    std::lgamma(1.0 - sigma) - log_factorial);
  return sin_half_pi(sigma) * zeta_continued(1.0 - sigma) * magnitude;
}

}  // namespace

bool is_integer(double s, double tol) noexcept { return std::abs(s - std::round(s)) <= tol; }

bool is_even_integer(double s, double tol) noexcept {
  if (!is_integer(s, tol)) return false;
  return std::fmod(std::round(s), 2.0) == 0.0;
}

double zeta_continued(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  if (s >= 0.5) return zeta_euler_maclaurin(s);
  if (s == 0.0) return -0.5;
  if (s < 0.0 && is_even_integer(s, 0.0)) return 0.0;
  const double magnitude =
      std::exp(s * std::log(2.0) + (s - 1.0) * std::log(pi) + std::lgamma(1.0 - s));
  return sin_half_pi(s) * magnitude * zeta_euler_maclaurin(1.0 - s);
}

double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: requires s > 1, got " + std::to_string(s));
  return zeta_euler_maclaurin(s);
}

double power_tail_sum(double a, long long first) {
  if (!(a > 1.0)) throw DomainError("power_tail_sum: requires a > 1");
  if (first < 1) throw DomainError("power_tail_sum: first index must be >= 1");
  constexpr long long kDirect = 64;
  double direct = 0.0;
  long long k = first;
  if (k < kDirect) {
    for (long long j = kDirect - 1; j >= k; --j) direct += std::pow(static_cast<double>(j), -a);
    k = kDirect;
  }
  return direct + euler_maclaurin_tail(a, static_cast<double>(k), 6);
}

CirclePolylog::CirclePolylog(double s) : s_(s), integer_order_(is_integer(s)) {
  if (!(s > 1.0)) throw DomainError("polylog: requires order s > 1");
  if (integer_order_) {
    integer_value_ = static_cast<int>(std::lround(s));
    s_ = integer_value_;
    for (int j = 1; j < integer_value_; ++j) harmonic_ += 1.0 / j;
    log_term_scale_ = std::exp(-std::lgamma(static_cast<double>(integer_value_)));
  } else {
    gamma_one_minus_s_ = std::tgamma(1.0 - s);
  }
  coefficients_.resize(kPolylogMaxTerms);
  for (int n = 0; n < kPolylogMaxTerms; ++n) {
    if (integer_order_ && n == integer_value_ - 1) {
      coefficients_[static_cast<std::size_t>(n)] = 0.0;
      continue;
    }
    coefficients_[static_cast<std::size_t>(n)] = zeta_over_factorial(s_, n);
  }
}

std::complex<double> CirclePolylog::operator()(double p) const {
  if (!(p >= 0.0 && p <= 2.0 * pi)) throw DomainError("polylog: angle outside [0, 2pi]");
  if (p == 0.0 || p == 2.0 * pi) return {zeta(s_), 0.0};
  if (p > pi) return std::conj(eval_upper_half(2.0 * pi - p));
  return eval_upper_half(p);
}

std::complex<double> CirclePolylog::eval_upper_half(double p) const {
  using namespace std::complex_literals;
  std::complex<double> sum;
  if (integer_order_) {
    const int m = integer_value_;
    // (ip)^{m-1} / (m-1)! * (H_{m-1} - Log(-ip)),  Log(-ip) = ln p - i pi/2
    std::complex<double> ip_power = std::pow(std::complex<double>(0.0, p), m - 1);
    sum = ip_power * log_term_scale_ * (harmonic_ - std::complex<double>(std::log(p), -0.5 * pi));
  } else {
    const double phase = -0.5 * pi * (s_ - 1.0);
    sum = gamma_one_minus_s_ * std::pow(p, s_ - 1.0) * std::polar(1.0, phase);
  }

  // i^n cycles 1, i, -1, -i.
  constexpr std::array<std::complex<double>, 4> kIPowers = {
      std::complex<double>(1, 0), std::complex<double>(0, 1), std::complex<double>(-1, 0),
      std::complex<double>(0, -1)};
  // zeta vanishes at negative even integers, so a single tiny term is not a
  // tail bound; require two in a row.
  double p_power = 1.0;
  int small_run = 0;
  for (int n = 0; n < kPolylogMaxTerms; ++n) {
    const double magnitude = coefficients_[static_cast<std::size_t>(n)] * p_power;
    sum += magnitude * kIPowers[static_cast<std::size_t>(n % 4)];
    const bool small = std::abs(magnitude) < 1e-17 * std::max(1.0, std::abs(sum));
    small_run = small ? small_run + 1 : 0;
    if (n > s_ + 1.0 && small_run >= 2) return sum;
    p_power *= p;
  }
  throw AccuracyError("polylog: series did not reach its tail bound within " +
                      std::to_string(kPolylogMaxTerms) + " terms");
}

std::complex<double> polylog_circle(double s, double p) {
  if (!(s > 1.0)) throw DomainError("polylog_circle: requires s > 1");
  if (!(p > 0.0 && p < 2.0 * pi)) throw DomainError("polylog_circle: requires p in (0, 2pi)");
  thread_local std::optional<CirclePolylog> cache;
  if (!cache || cache->order() != (is_integer(s) ? std::round(s) : s)) cache.emplace(s);
  return (*cache)(p);
}

double g(double s, double p) {
  if (!(s > 1.0)) throw DomainError("g: requires s > 1");
  const double a = std::abs(p);
  if (a > pi) throw DomainError("g: requires p in [-pi, pi]");
  if (a == 0.0 || a == pi) return 0.0;
  return 2.0 * std::sin(a) * polylog_circle(s, a).imag();
}

double c_coefficient(double s) {
  if (!(s > 2.0)) throw DomainError("c_coefficient: requires s > 2");
  if (std::abs(s - 4.0) <= kIntegerTolerance) throw DomainError("c_coefficient: s = 4 is excluded");
  if (is_even_integer(s)) return 0.0;
  return -2.0 * pi / (std::tgamma(s) * sin_half_pi(s));
}

}  // namespace superlattice::special
