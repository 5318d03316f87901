#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "superlattice/errors.hpp"
#include "superlattice/special_functions.hpp"

namespace sf = superlattice::special;
using superlattice::DomainError;

namespace {

constexpr double kPi = std::numbers::pi;

// Partial sum plus the integral midpoint tail estimate; error well below 1e-12 for K = 2e5, s >= 2.
double zeta_oracle(double s) {
  constexpr int kTerms = 200000;
  double sum = 0.0;
  for (int k = kTerms; k >= 1; --k) sum += std::pow(k, -s);
  return sum + std::pow(kTerms + 0.5, 1.0 - s) / (s - 1.0);
}

// Direct series sum_k e^{ikp} / k^s; only used where it converges fast.
std::complex<double> polylog_oracle(double s, double p, int terms) {
  std::complex<double> sum = 0.0;
  for (int k = terms; k >= 1; --k) sum += std::polar(std::pow(k, -s), k * p);
  return sum;
}

}  // namespace

TEST(Zeta, FrozenValues) {
  EXPECT_NEAR(sf::zeta(2.0), 1.6449340668482264, 1e-12);
  EXPECT_NEAR(sf::zeta(4.0), 1.0823232337111382, 1e-12);
  EXPECT_NEAR(sf::zeta(50.0), 1.0000000000000009, 1e-15);
  EXPECT_NEAR(sf::zeta(1.5), 2.6123753486854883, 1e-12);
}

TEST(Zeta, MatchesPartialSumOracle) {
  for (double s : {2.0, 2.5, 3.0, 4.0, 5.0, 7.5}) EXPECT_NEAR(sf::zeta(s), zeta_oracle(s), 2e-12) << s;
  EXPECT_NEAR(zeta_oracle(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-12);
}

TEST(Zeta, RejectsNonConvergentRange) {
  EXPECT_THROW((void)sf::zeta(1.0), DomainError);
  EXPECT_THROW((void)sf::zeta(0.5), DomainError);
}

TEST(Zeta, ContinuationBelowOne) {
  EXPECT_NEAR(sf::zeta_continued(0.0), -0.5, 1e-14);
  EXPECT_NEAR(sf::zeta_continued(-1.0), -1.0 / 12.0, 1e-13);
  EXPECT_NEAR(sf::zeta_continued(-2.0), 0.0, 1e-14);
  EXPECT_NEAR(sf::zeta_continued(-0.5), -0.2078862249773545, 1e-12);
  EXPECT_NEAR(sf::zeta_continued(3.0), sf::zeta(3.0), 1e-13);
}

TEST(PowerTailSum, MatchesZetaDifference) {
  for (double a : {1.5, 2.0, 5.0}) {
    double head = 0.0;
    for (int k = 1; k < 1000; ++k) head += std::pow(k, -a);
    EXPECT_NEAR(sf::power_tail_sum(a, 1000) + head, sf::zeta(a), 1e-12) << a;
  }
  // far tail ~ K^{1-a}/(a-1)
  EXPECT_NEAR(sf::power_tail_sum(1.5, 1000000000000LL) / (2.0 * std::pow(1e12, -0.5)), 1.0, 1e-6);
}

TEST(PolylogCircle, FrozenValues) {
  // Li_3(-1) = -(3/4) zeta(3)
  const auto at_pi = sf::polylog_circle(3.0, kPi);
  EXPECT_NEAR(at_pi.real(), -0.75 * sf::zeta(3.0), 1e-12);
  EXPECT_NEAR(at_pi.imag(), 0.0, 1e-12);
  // Catalan's constant
  EXPECT_NEAR(sf::polylog_circle(2.0, kPi / 2).imag(), 0.91596559417721902, 1e-12);

  struct Case {
    double s, p, re, im;
  };
  const Case cases[] = {
      {2.5, 1.0, 0.39951087658024141, 0.97600913194244239},
      {3.5, 2.5, -0.77276286594855578, 0.52987124547951382},
      {4.0, 0.3, 1.0152010341735450, 0.34694750546658899},
      {5.5, 0.05, 1.0237967836190548, 0.052707483395953770},
      {2.2, 3.0, -0.83629509220306731, 0.10234529887987748},
  };
  for (const auto& c : cases) {
    const auto v = sf::polylog_circle(c.s, c.p);
    EXPECT_NEAR(v.real(), c.re, 1e-10) << c.s << ' ' << c.p;
    EXPECT_NEAR(v.imag(), c.im, 1e-10) << c.s << ' ' << c.p;
  }
}

TEST(PolylogCircle, AgreesWithDirectSeries) {
  for (double s : {4.0, 5.5, 7.0})
    for (double p : {0.2, 1.3, 3.0, 4.4, 6.0}) {
      const auto v = sf::polylog_circle(s, p);
      const auto o = polylog_oracle(s, p, 400000);
      // series tail bounded by sum_{k>K} k^{-s}
      EXPECT_NEAR(v.real(), o.real(), 1e-10) << s << ' ' << p;
      EXPECT_NEAR(v.imag(), o.imag(), 1e-10) << s << ' ' << p;
    }
}

TEST(PolylogCircle, ConjugateSymmetryAndLimit) {
  for (double p : {0.4, 1.7, 2.9}) {
    const auto a = sf::polylog_circle(3.3, p);
    const auto b = sf::polylog_circle(3.3, 2 * kPi - p);
    EXPECT_NEAR(a.real(), b.real(), 1e-13);
    EXPECT_NEAR(a.imag(), -b.imag(), 1e-13);
  }
  EXPECT_NEAR(sf::polylog_circle(3.0, 1e-9).real(), sf::zeta(3.0), 1e-8);
}

TEST(PolylogCircle, Domain) {
  EXPECT_THROW((void)sf::polylog_circle(3.0, 0.0), DomainError);
  EXPECT_THROW((void)sf::polylog_circle(3.0, 2 * kPi), DomainError);
  EXPECT_THROW((void)sf::polylog_circle(1.0, 1.0), DomainError);
}

TEST(GFunction, ValuesAndEvenness) {
  EXPECT_EQ(sf::g(3.0, 0.0), 0.0);
  EXPECT_NEAR(sf::g(3.0, kPi), 0.0, 1e-15);
  EXPECT_NEAR(sf::g(3.0, kPi / 2), 1.9378922925187388, 1e-12);
  EXPECT_NEAR(sf::g(3.0, kPi / 2), 2.0 * kPi * kPi * kPi / 32.0, 1e-12);
  for (double p : {0.3, 1.1, 2.7}) EXPECT_DOUBLE_EQ(sf::g(2.5, p), sf::g(2.5, -p));
}

TEST(CCoefficient, Values) {
  EXPECT_NEAR(sf::c_coefficient(3.0), kPi, 1e-13);
  EXPECT_NEAR(sf::c_coefficient(2.5), 6.6843420656826680, 1e-12);
  EXPECT_NEAR(sf::c_coefficient(3.5), 2.6737368262730672, 1e-12);
  EXPECT_NEAR(sf::c_coefficient(5.0), -0.26179938779914944, 1e-13);
  EXPECT_EQ(sf::c_coefficient(6.0), 0.0);
  EXPECT_THROW((void)sf::c_coefficient(4.0), DomainError);
  EXPECT_THROW((void)sf::c_coefficient(2.0), DomainError);
}

TEST(CCoefficient, MatchesLeadingSingularTerm) {
  // 2 Im Li_s(e^{ip}) = -(C_s/2) p^{s-1} + 2 zeta(s-1) p + O(p^3)
  const double s = 2.5;
  for (double p : {1e-3, 1e-4}) {
    const double lhs = 2.0 * sf::polylog_circle(s, p).imag();
    const double rhs = -0.5 * sf::c_coefficient(s) * std::pow(p, s - 1) + 2.0 * sf::zeta(s - 1) * p;
    EXPECT_LT(std::abs(lhs - rhs), 10.0 * p * p * p) << p;
  }
}
