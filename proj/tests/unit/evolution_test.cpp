#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "superlattice/errors.hpp"
#include "superlattice/evolution.hpp"
#include "superlattice/special_functions.hpp"

using namespace superlattice::evolution;
using superlattice::lattice::LatticeField;
using superlattice::lattice::Point;
using superlattice::lattice::Window;
using superlattice::symbol::SymbolSpec;

namespace {

constexpr GridOptions kPlanned{.refine = false};

double sup_over(const LatticeField& a, const LatticeField& b, const Window& w) {
  double worst = 0.0;
  for (std::int64_t x = w.origin.x; x < w.origin.x + w.extent.width; ++x)
    for (std::int64_t y = w.origin.y; y < w.origin.y + w.extent.height; ++y)
      worst = std::max(worst, std::abs(a.at({x, y}) - b.at({x, y})));
  return worst;
}

}  // namespace

TEST(SpectralDelta, TimeZeroIsDelta) {
  for (double s : {2.5, 3.0, 6.0}) {
    const auto r = spectral_solve_delta(SymbolSpec::infinite(s), 0.0, 5, {.n = 64});
    for (std::int64_t x = -5; x <= 5; ++x)
      for (std::int64_t y = -5; y <= 5; ++y)
        EXPECT_NEAR(r.field.at({x, y}), x == 0 && y == 0 ? 1.0 : 0.0, 1e-12);
  }
}

TEST(SpectralDelta, Symmetries) {
  for (double s : {2.5, 3.0, 6.0}) {
    const auto r = spectral_solve_delta(SymbolSpec::infinite(s), 3.0, 6, {.n = 256});
    const auto& f = r.field;
    EXPECT_NEAR(f.at({1, 0}), f.at({0, 1}), 1e-14);
    EXPECT_NEAR(f.at({1, 0}), f.at({-1, 0}), 1e-14);
    EXPECT_NEAR(f.at({1, 0}), f.at({0, -1}), 1e-14);
    for (std::int64_t x = -6; x <= 6; ++x)
      for (std::int64_t y = -6; y <= 6; ++y) {
        EXPECT_NEAR(f.at({x, y}), f.at({-x, y}), 1e-14);
        EXPECT_NEAR(f.at({x, y}), f.at({x, -y}), 1e-14);
        EXPECT_NEAR(f.at({x, y}), f.at({y, x}), 1e-14);
      }
  }
}

TEST(SpectralDelta, DiffusiveCentreValue) {
  namespace sf = superlattice::special;
  const double gamma6 = (sf::zeta(5.0) + 2.0 * sf::zeta(3.0)) / 3.0;
  const double expected = 1.0 / (4.0 * std::numbers::pi * gamma6 * 100.0);
  EXPECT_NEAR(expected, 6.94e-4, 1e-6);
  const auto r = spectral_solve_delta(SymbolSpec::infinite(6.0), 100.0, 10);
  EXPECT_NEAR(r.field.at({0, 0}), expected, 0.1 * expected);
  EXPECT_LT(r.refinement_error, 1e-9);
}

TEST(SpectralDelta, DirectSumOracleForNearestNeighbour) {
  // N = 1 is the simple random walk: u_{0,0}(t) = (e^{-2t} I_0(2t))^2
  const double t = 1.5;
  double bessel = 0.0, term = 1.0;
  for (int m = 0; m < 60; ++m) {
    if (m > 0) term *= (t * t) / (static_cast<double>(m) * m);
    bessel += term;
  }
  const double expected = std::pow(std::exp(-2.0 * t) * bessel, 2);
  const auto r = spectral_solve_delta(SymbolSpec::at_order(5.0, 1), t, 4);
  EXPECT_NEAR(r.field.at({0, 0}), expected, 1e-12);
}

TEST(SpectralDelta, ConservationAndPositivity) {
  for (double s : {2.5, 3.0, 6.0}) {
    const auto spec = SymbolSpec::infinite(s);
    for (double t : {0.1, 1.0, 10.0, 100.0}) {
      const auto r = spectral_solve_delta(spec, t, 20, kPlanned);
      EXPECT_NEAR(r.captured_mass, 1.0, 1e-6) << s << ' ' << t;
      EXPECT_LE(r.captured_mass, 1.0 + 1e-9);
      EXPECT_GE(r.field.min_value(), -1e-9) << s << ' ' << t;
      EXPECT_LT(r.imaginary_residue, 1e-10);
    }
  }
}

TEST(SpectralDelta, WindowMassApproachesOne) {
  const auto r = spectral_solve_delta(SymbolSpec::infinite(6.0), 1.0, 60);
  EXPECT_NEAR(r.window_mass, 1.0, 1e-6);
}

TEST(SpectralDelta, CentreDecreasesOverDyadicTimes) {
  for (double s : {2.5, 3.0, 6.0}) {
    double previous = 1.0;
    for (double t = 0.25; t <= 64.0; t *= 2.0) {
      const double centre = spectral_solve_delta(SymbolSpec::infinite(s), t, 2, kPlanned).field.at({0, 0});
      EXPECT_LT(centre, previous) << s << ' ' << t;
      previous = centre;
    }
  }
}

TEST(SpectralDelta, StridedPlanMatchesUnitStride) {
  const auto spec = SymbolSpec::infinite(6.0);
  const auto coarse = spectral_solve_delta(spec, 4000.0, 120, kPlanned);
  ASSERT_GT(coarse.stride, 1);
  const auto fine = spectral_solve_delta(spec, 4000.0, 120, {.n = 2048, .stride = 1});
  for (std::int64_t i = 0; i < coarse.field.width(); ++i)
    for (std::int64_t j = 0; j < coarse.field.height(); ++j) {
      const auto site = coarse.field.site(i, j);
      EXPECT_NEAR(coarse.field.sample(i, j), fine.field.at(site), 1e-10);
    }
}

TEST(SpectralDelta, RefinementCeiling) {
  EXPECT_THROW((void)spectral_solve_delta(SymbolSpec::infinite(2.5), 1.0, 4, {.refine_tol = 1e-30, .max_n = 128}),
               superlattice::NonConvergenceError);
  EXPECT_THROW((void)spectral_solve_delta(SymbolSpec::infinite(3.0), -1.0, 4), superlattice::DomainError);
  EXPECT_THROW((void)spectral_solve_delta(SymbolSpec::infinite(3.0), 1.0, 4, {.n = 63}), superlattice::DomainError);
}

TEST(SpectralGeneral, ReducesToDelta) {
  const auto spec = SymbolSpec::infinite(3.0);
  const GridOptions fixed{.n = 256};
  const auto a = spectral_solve_delta(spec, 2.0, 8, fixed);
  const auto b = spectral_solve_general(spec, 2.0, LatticeField::delta({0, 0}), 8, fixed);
  EXPECT_LT(sup_over(a.field, b.field, Window::centered(8)), 1e-13);
}

TEST(SpectralGeneral, Translation) {
  const auto spec = SymbolSpec::infinite(3.0);
  const GridOptions fixed{.n = 256};
  const auto base = spectral_solve_delta(spec, 2.0, 12, fixed);
  const auto moved = spectral_solve_general(spec, 2.0, LatticeField::delta({2, -1}), 12, fixed);
  for (std::int64_t x = -9; x <= 9; ++x)
    for (std::int64_t y = -9; y <= 9; ++y)
      EXPECT_NEAR(moved.field.at({x + 2, y - 1}), base.field.at({x, y}), 1e-13);
}

TEST(SpectralGeneral, Linearity) {
  const auto spec = SymbolSpec::infinite(6.0);
  LatticeField pair({0, 0}, {2, 1});
  pair.set({0, 0}, 1.0);
  pair.set({1, 0}, 1.0);
  const auto sum = spectral_solve_general(spec, 1.0, pair, 60);
  EXPECT_NEAR(sum.field.mass(), 2.0, 1e-6);

  LatticeField dipole({0, 0}, {2, 1});
  dipole.set({0, 0}, 1.0);
  dipole.set({1, 0}, -1.0);
  const auto diff = spectral_solve_general(spec, 1.0, dipole, 60);
  EXPECT_NEAR(diff.field.mass(), 0.0, 1e-9);

  const auto a = spectral_solve_delta(spec, 1.0, 30, {.n = 256});
  const auto both = spectral_solve_general(spec, 1.0, pair, 30, {.n = 256});
  for (std::int64_t x = -20; x <= 20; ++x)
    EXPECT_NEAR(both.field.at({x, 3}), a.field.at({x, 3}) + a.field.at({x - 1, 3}), 1e-13);
}

TEST(SpectralGeneral, RejectsStride) {
  EXPECT_THROW((void)spectral_solve_general(SymbolSpec::infinite(3.0), 1.0, LatticeField({0, 0}, {1, 1}, 2), 4),
               superlattice::DomainError);
}

TEST(TimeDomain, TimeZeroReturnsInitial) {
  LatticeField u0({-1, 0}, {3, 2});
  u0.set({-1, 0}, 0.25);
  u0.set({1, 1}, 0.75);
  const auto r = time_domain_solve(Window::centered(6), SymbolSpec::at_order(3.0, 3), 0.0, u0);
  EXPECT_LT(sup_over(r, u0, Window::centered(6)), 1e-15);
}

TEST(TimeDomain, MatchesSpectralRoute) {
  const auto spec = SymbolSpec::at_order(3.5, 10);
  const auto spectral = spectral_solve_delta(spec, 1.0, 40, {.stride = 1});
  const auto direct = time_domain_solve(Window::centered(40), spec, 1.0, LatticeField::delta({0, 0}));
  EXPECT_LT(sup_over(spectral.field, direct, Window::centered(40)), 1e-6);
}

TEST(TimeDomain, SelfConvergence) {
  const auto spec = SymbolSpec::at_order(3.0, 4);
  const auto u0 = LatticeField::delta({0, 0});
  const auto loose = time_domain_solve(Window::centered(15), spec, 2.0, u0, {.rel_tol = 1e-6});
  const auto tight = time_domain_solve(Window::centered(15), spec, 2.0, u0, {.rel_tol = 5e-7});
  EXPECT_LT(sup_over(loose, tight, Window::centered(15)), 1e-6);
}

TEST(TimeDomain, SemigroupMassAndPositivity) {
  const auto spec = SymbolSpec::at_order(3.0, 3);
  const auto w = Window::centered(15);
  const auto u0 = LatticeField::delta({0, 0});
  const auto half = time_domain_solve(w, spec, 0.5, u0);
  const auto chained = time_domain_solve(w, spec, 0.7, half);
  const auto whole = time_domain_solve(w, spec, 1.2, u0);
  EXPECT_LT(sup_over(chained, whole, w), 1e-7);
  EXPECT_GE(whole.min_value(), -1e-10);
  EXPECT_LE(half.mass(), 1.0 + 1e-12);
  EXPECT_LE(whole.mass(), half.mass() + 1e-12);
}

TEST(TimeDomain, AbsorbingWindowLosesMass) {
  const auto spec = SymbolSpec::at_order(3.0, 3);
  const auto r = time_domain_solve(Window::centered(3), spec, 2.0, LatticeField::delta({0, 0}));
  EXPECT_LT(r.mass(), 0.99);
  EXPECT_GE(r.min_value(), -1e-10);
}

TEST(TimeDomain, Errors) {
  const auto u0 = LatticeField::delta({0, 0});
  EXPECT_THROW((void)time_domain_solve(Window::centered(4), SymbolSpec::infinite(3.0), 1.0, u0),
               superlattice::DomainError);
  EXPECT_THROW((void)time_domain_solve(Window::centered(4), SymbolSpec::at_order(3.0, 2), 1.0,
                                       LatticeField::delta({9, 0})),
               superlattice::WindowTooSmallError);
  EXPECT_THROW((void)time_domain_solve(Window::centered(4), SymbolSpec::at_order(3.0, 2), 1.0, u0, {.max_steps = 2}),
               superlattice::NonConvergenceError);
}

TEST(Planning, GridPlanIsSane) {
  for (double s : {2.5, 3.0, 6.0})
    for (double t : {0.1, 10.0, 1000.0}) {
      const auto plan = plan_grid(SymbolSpec::infinite(s), t, 10);
      EXPECT_GE(plan.n, 64);
      EXPECT_EQ(plan.n & (plan.n - 1), 0);
      EXPECT_LE(plan.n, 4096);
      EXPECT_GE(plan.stride, 1);
    }
  EXPECT_NEAR(spread_length(SymbolSpec::infinite(6.0), 1e4), std::sqrt(1e4 * 1.1470138538208528), 2.0);
}
