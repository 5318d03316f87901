#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "superlattice/asymptotics.hpp"
#include "superlattice/errors.hpp"
#include "superlattice/special_functions.hpp"

using namespace superlattice::asymptotics;
using superlattice::lattice::LatticeField;
using superlattice::symbol::SymbolSpec;
namespace sf = superlattice::special;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma6 = 1.1470138538208528;

double c_oracle(double s) { return -2.0 * kPi / (std::tgamma(s) * std::sin(s * kPi / 2.0)); }

double h1_oracle(double s, double p, double q) {
  return c_oracle(s) * (std::pow(std::abs(p), s) - std::pow(std::abs(q), s)) / (p * p - q * q);
}

// F_s(0) in polar form: (1 / 4 pi^2) int Gamma(2/a) / (a K(theta)^{2/a}) dtheta with K = h1 on the unit circle.
double centre_oracle(double s) {
  const double a = s - 2.0;
  constexpr int kSteps = 20000;
  double sum = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double theta = 2.0 * kPi * (i + 0.5) / kSteps;
    const double c = std::cos(theta), sn = std::sin(theta);
    const double k = std::abs(std::abs(c) - std::abs(sn)) < 1e-9 ? 0.5 * s * c_oracle(s) * std::pow(std::abs(c), s - 2.0)
                                                                   : h1_oracle(s, c, sn);
    sum += std::tgamma(2.0 / a) / (a * std::pow(k, 2.0 / a));
  }
  return sum * (2.0 * kPi / kSteps) / (4.0 * kPi * kPi);
}

LatticeField gaussian_field(double gamma, std::int64_t radius, std::int64_t stride) {
  const std::int64_t side = 2 * radius + 1;
  LatticeField f({-radius * stride, -radius * stride}, {side, side}, stride);
  for (std::int64_t i = 0; i < side; ++i)
    for (std::int64_t j = 0; j < side; ++j) {
      const double x = static_cast<double>(i - radius), y = static_cast<double>(j - radius);
      f.sample(i, j) = std::exp(-(x * x + y * y) / (4.0 * gamma));
    }
  return f;
}

}  // namespace

TEST(Symbols, H1Examples) {
  EXPECT_NEAR(h1(3.0, 1.0, 0.0), kPi, 1e-13);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double p = u(rng), q = u(rng);
    EXPECT_NEAR(h1(3.0, 2 * p, 2 * q), 2.0 * h1(3.0, p, q), 1e-12 * (1 + h1(3.0, p, q)));
    EXPECT_NEAR(h1(2.5, p, q), h1_oracle(2.5, p, q), 1e-11 * (1 + h1(2.5, p, q)));
    EXPECT_NEAR(h1(5.0, p, q), h1_oracle(5.0, p, q), 1e-11 * (1 + std::abs(h1(5.0, p, q))));
  }
  for (double s : {2.5, 3.0, 3.5})
    for (double p : {0.3, 1.0, 2.0})
      EXPECT_NEAR(h1(s, p, p), 0.5 * s * c_oracle(s) * std::pow(p, s - 2.0), 1e-12) << s;
  EXPECT_NEAR(h1(3.0, 1.0, 1.0 + 1e-9), h1(3.0, 1.0, 1.0), 1e-8);
  EXPECT_EQ(h1(3.0, 0.0, 0.0), 0.0);
}

TEST(Symbols, H1PositiveOnUnitCircle) {
  for (double s : {2.2, 2.5, 3.0, 3.5, 3.9}) {
    double least = 1e300;
    for (int i = 0; i < 720; ++i) {
      const double th = 2.0 * kPi * i / 720.0;
      least = std::min(least, h1(s, std::cos(th), std::sin(th)));
    }
    EXPECT_GT(least, 0.0) << s;
    EXPECT_GT(h1_lower_bound_constant(s), 0.0);
  }
}

TEST(Symbols, H2Examples) {
  EXPECT_EQ(h2(6.0, 0.0, 0.0), 0.0);
  EXPECT_NEAR(h2(6.0, 1.0, 1.0), 2.0 * kGamma6, 1e-13);
  EXPECT_NEAR(h2(6.0, 1.0, 1.0), 2.29403, 1e-5);
  EXPECT_DOUBLE_EQ(h2(5.5, 0.3, 1.7), h2(5.5, 1.7, 0.3));
  EXPECT_THROW((void)h2(3.0, 1.0, 1.0), superlattice::DomainError);
}

TEST(Symbols, GammaCoefficient) {
  EXPECT_NEAR(gamma_coefficient(6.0), kGamma6, 1e-14);
  EXPECT_NEAR(gamma_coefficient(2.5), 0.73220096624359307, 1e-12);
  EXPECT_NEAR(gamma_coefficient(3.0), 0.21497802228274215, 1e-12);
  EXPECT_THROW((void)gamma_coefficient(4.0), superlattice::DomainError);
}

TEST(Scaling, AlphaAssignment) {
  for (double s = 2.1; s < 8.0; s += 0.1) {
    if (std::abs(s - 4.0) < 1e-9) continue;
    const double a = scaling_order(s);
    EXPECT_DOUBLE_EQ(a, s < 4.0 ? s - 2.0 : 2.0);
    EXPECT_EQ(1.0 / a > 0.5, s < 4.0) << s;
  }
  EXPECT_THROW((void)scaling_order(4.0), superlattice::DomainError);
}

TEST(Profile, GaussianCentreAndMass) {
  const auto prof = limit_profile(6.0, 12.0, 0.25);
  EXPECT_NEAR(prof.at(0, 0), 1.0 / (4.0 * kPi * kGamma6), 1e-14);
  EXPECT_NEAR(prof.at(0, 0), 0.06938, 1e-5);
  EXPECT_NEAR(prof.integral(), 1.0, 1e-6);
  EXPECT_GE(*std::min_element(prof.values.begin(), prof.values.end()), 0.0);
}

TEST(Profile, GaussianMatchesNumericInversion) {
  const auto closed = limit_profile(6.0, 6.0, 0.25);
  const auto numeric = gaussian_profile_numeric(6.0, 6.0, 0.25, {.n = 256});
  ASSERT_EQ(closed.radius, numeric.radius);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> idx(-closed.radius, closed.radius);
  for (int k = 0; k < 50; ++k) {
    const auto i = idx(rng), j = idx(rng);
    EXPECT_NEAR(numeric.at(i, j), closed.at(i, j), 1e-6);
    EXPECT_NEAR(closed.at(i, j), gaussian_profile(6.0, i * 0.25, j * 0.25), 1e-15);
  }
}

TEST(Profile, HeavyTailedCentreMatchesPolarOracle) {
  EXPECT_NEAR(centre_oracle(3.0), 0.015119735763916761, 1e-9);
  EXPECT_NEAR(centre_oracle(3.5), 0.024819676962199965, 1e-9);
  for (double s : {3.0, 3.5}) {
    const auto prof = limit_profile(s, 4.0, 0.1, {.n = 1024});
    EXPECT_NEAR(prof.at(0, 0), centre_oracle(s), 0.01 * centre_oracle(s)) << s;
    EXPECT_NEAR(prof.grid_mass, 1.0, 1e-6);
    EXPECT_GE(*std::min_element(prof.values.begin(), prof.values.end()), -1e-9);
    EXPECT_NEAR(prof.at(3, 7), prof.at(7, 3), 1e-15);
    EXPECT_NEAR(prof.at(-3, 7), prof.at(3, -7), 1e-15);
  }
}

TEST(Profile, RejectsCoarseFrequencyBox) {
  EXPECT_THROW((void)limit_profile(2.5, 4.0, 1.0), superlattice::AccuracyError);
}

TEST(Width, DeltaAndGaussian) {
  LatticeField point({-1, -1}, {3, 3});
  point.set({0, 0}, 1.0);
  const auto delta = fwhm(point);
  EXPECT_DOUBLE_EQ(delta.width, 2.0);
  EXPECT_TRUE(delta.within_window);

  for (double gamma : {4.0, 25.0, 100.0}) {
    const auto w = fwhm(gaussian_field(gamma, 80, 1));
    EXPECT_NEAR(w.width, gaussian_fwhm_prefactor(gamma), 2.0) << gamma;
    EXPECT_NEAR(gaussian_fwhm_prefactor(gamma), 4.0 * std::sqrt(gamma * std::log(2.0)), 1e-12);
    EXPECT_NEAR(half_fwhm_prefactor(gamma), 0.5 * gaussian_fwhm_prefactor(gamma), 1e-12);
  }
}

TEST(Width, DoublingCoordinatesDoublesWidth) {
  const auto base = fwhm(gaussian_field(9.0, 30, 1));
  const auto doubled = fwhm(gaussian_field(9.0, 30, 2));
  EXPECT_DOUBLE_EQ(doubled.width, 2.0 * base.width);
}

TEST(Width, FlatAndUncrossed) {
  LatticeField flat({-2, -2}, {5, 5});
  for (double& v : flat.values()) v = 1.0;
  EXPECT_THROW((void)fwhm(flat), superlattice::FlatFieldError);
  EXPECT_THROW((void)fwhm(LatticeField({-1, -1}, {3, 3})), superlattice::FlatFieldError);
  EXPECT_THROW((void)fwhm(LatticeField::delta({0, 0})), superlattice::FlatFieldError);
  const auto wide = fwhm(gaussian_field(400.0, 5, 1));
  EXPECT_FALSE(wide.within_window);
}

TEST(Width, ProfileWidthOfGaussian) {
  const auto prof = limit_profile(6.0, 10.0, 0.05);
  EXPECT_NEAR(fwhm(prof).width, gaussian_fwhm_prefactor(kGamma6), 0.05);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.emplace_back(t, 3.0 * std::pow(t, 0.7));
  const auto fit = fit_exponent(pts);
  EXPECT_NEAR(fit.kappa, 0.7, 1e-12);
  EXPECT_NEAR(fit.c, 3.0, 1e-11);
  EXPECT_NEAR(fit.stderr_kappa, 0.0, 1e-10);
  EXPECT_NEAR(fit_prefactor(pts, 0.7), 3.0, 1e-12);

  pts.pop_back();
  pts.pop_back();
  EXPECT_THROW((void)fit_exponent(pts), superlattice::DomainError);
  std::vector<std::pair<double, double>> same(5, {2.0, 1.0});
  EXPECT_THROW((void)fit_exponent(same), superlattice::DomainError);
}

TEST(Truncation, Coefficients) {
  for (double s : {2.5, 3.0, 6.0}) EXPECT_DOUBLE_EQ(truncation_coefficient(s, 1), 1.0);
  double direct = 0.0;
  for (int k = 1; k <= 7; ++k) direct += (2.0 * k * k * k + k) / (3.0 * std::pow(k, 4.5));
  EXPECT_NEAR(truncation_coefficient(4.5, 7), direct, 1e-14);
  EXPECT_NEAR(truncation_limit(6.0), kGamma6, 1e-14);
  EXPECT_NEAR(truncation_coefficient(6.0, 100000), kGamma6, 1e-9);
  EXPECT_NEAR(truncation_coefficient(3.0, 200) / truncation_coefficient(3.0, 100), 2.0, 0.1);
  EXPECT_NEAR(truncation_growth(3.0, 100), 200.0 / 3.0, 1e-12);
  double previous = 0.0;
  for (std::int64_t n : {1, 2, 5, 10, 50}) {
    const double c = truncation_coefficient(6.0, n);
    EXPECT_GT(c, previous);
    EXPECT_LT(c, kGamma6);
    previous = c;
  }
}

TEST(Pipeline, DiffusiveExponentAndPrefactor) {
  const std::vector<double> times{25, 50, 100, 200, 400};
  const auto pts = fwhm_series(SymbolSpec::infinite(6.0), times);
  const auto fit = fit_exponent(pts);
  EXPECT_NEAR(fit.kappa, 0.5, 0.05);
  EXPECT_NEAR(fit_prefactor(pts, 0.5), gaussian_fwhm_prefactor(kGamma6), 0.05 * gaussian_fwhm_prefactor(kGamma6));
}

TEST(Pipeline, TruncatedPrefactorsIncreaseTowardsLimit) {
  const std::vector<double> times{25, 50, 100, 200, 400};
  const double limit = fit_prefactor(fwhm_series(SymbolSpec::infinite(6.0), times), 0.5);
  std::vector<double> prefactors;
  for (std::int64_t n : {5, 10, 20})
    prefactors.push_back(fit_prefactor(fwhm_series(SymbolSpec::at_order(6.0, n), times), 0.5));
  EXPECT_LT(prefactors[0], prefactors[1]);
  EXPECT_LT(prefactors[1], prefactors[2]);
  EXPECT_LT(std::abs(prefactors[2] - limit), std::abs(prefactors[0] - limit));
}

TEST(Pipeline, RescaledDeviationShrinks) {
  const auto early = rescaled_deviation(6.0, 25.0);
  const auto late = rescaled_deviation(6.0, 400.0);
  EXPECT_LT(late.deviation, early.deviation);
  EXPECT_LT(late.deviation, 0.05 * late.profile_center);
  EXPECT_NEAR(late.profile_center, 1.0 / (4.0 * kPi * kGamma6), 1e-12);
}
