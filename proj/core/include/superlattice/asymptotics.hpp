#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "superlattice/evolution.hpp"
#include "superlattice/lattice.hpp"
#include "superlattice/symbol.hpp"

namespace superlattice::asymptotics {

using lattice::LatticeField;
using symbol::SymbolSpec;

// alpha for the untruncated operator: s-2 on (2,4), 2 on (4,inf).
[[nodiscard]] double scaling_order(double s);

// Leading homogeneous term of degree s-2: C_s (|p|^s - |q|^s) / (p^2 - q^2).
[[nodiscard]] double h1(double s, double p, double q);
// Quadratic term gamma_s (p^2 + q^2); defined for s > 4 only.
[[nodiscard]] double h2(double s, double p, double q);
// (zeta(s-1) + 2 zeta(s-3)) / 3 with zeta continued below 1; any s > 2 except 4.
[[nodiscard]] double gamma_coefficient(double s);
// 0.95 * min over the unit circle of h1 / (|cos|^alpha + |sin|^alpha), 2 < s < 4.
[[nodiscard]] double h1_lower_bound_constant(double s);
// Smallest V with e^{-h1} < 1e-12 outside [-V, V]^2, from the bound above.
[[nodiscard]] double profile_cutoff(double s);

// Samples of F_s on (i * spacing, j * spacing), |i|, |j| <= radius.
struct LimitProfile {
  double s = 0.0;
  double alpha = 0.0;
  double spacing = 0.0;
  std::int64_t radius = 0;
  std::vector<double> values;  // (2 radius + 1)^2, x-major
  double grid_mass = 1.0;      // integral over the whole periodic quadrature grid

  [[nodiscard]] std::int64_t side() const noexcept { return 2 * radius + 1; }
  [[nodiscard]] double at(std::int64_t i, std::int64_t j) const {
    return values[static_cast<std::size_t>((i + radius) * side() + (j + radius))];
  }
  [[nodiscard]] double integral() const noexcept;
};

struct ProfileOptions {
  std::optional<std::int64_t> n;  // transform size for 2 < s < 4
  std::int64_t max_n = 4096;
  unsigned threads = 0;
};

// F_s(xi, eta): closed-form Gaussian 1/(4 pi gamma) e^{-(xi^2+eta^2)/(4 gamma)} for
// s > 4; trapezoidal inversion of e^{-h1} over [-pi/spacing, pi/spacing]^2 for
// 2 < s < 4 (AccuracyError if that box misses the 1e-12 tail level).
[[nodiscard]] LimitProfile limit_profile(double s, double extent, double spacing, const ProfileOptions& options = {});
[[nodiscard]] double gaussian_profile(double s, double xi, double eta);
// Numerical inversion of e^{-h2}, for checking the closed form.
[[nodiscard]] LimitProfile gaussian_profile_numeric(double s, double extent, double spacing,
                                                    const ProfileOptions& options = {});

struct RadialSample {
  double radius;
  double value;
};

struct WidthMeasurement {
  double width = 0.0;
  bool within_window = true;  // false: half level not crossed; width is a lower bound
};

// Twice the smallest sampled radius beyond which every sample is at most half
// the central value.
[[nodiscard]] WidthMeasurement fwhm(std::vector<RadialSample> samples, double center);
[[nodiscard]] WidthMeasurement fwhm(const LatticeField& field);
[[nodiscard]] WidthMeasurement fwhm(const LimitProfile& profile);

struct ScalingFit {
  double kappa = 0.0;
  double c = 0.0;
  double stderr_kappa = 0.0;
  std::vector<std::pair<double, double>> points;
};

// Least squares on (log t, log width).
[[nodiscard]] ScalingFit fit_exponent(std::span<const std::pair<double, double>> points);
// Prefactor with the exponent held fixed: exp(mean(log width - kappa log t)).
[[nodiscard]] double fit_prefactor(std::span<const std::pair<double, double>> points, double kappa);

// Solve from a point mass at time t and measure the width of the result.
struct WidthOptions {
  double window_scale = 8.0;  // window radius in units of t^{1/alpha}
  unsigned threads = 0;
};
[[nodiscard]] WidthMeasurement measure_fwhm(const SymbolSpec& spec, double t, const WidthOptions& options = {});
[[nodiscard]] std::vector<std::pair<double, double>> fwhm_series(const SymbolSpec& spec, std::span<const double> times,
                                                                 const WidthOptions& options = {});

struct DeviationResult {
  double t = 0.0;
  double deviation = 0.0;      // sup |t^{2/alpha} u - F_s| over the significant region
  double profile_center = 0.0; // F_s(0, 0)
  double spacing = 0.0;        // xi mesh
  std::int64_t stride = 1;
  std::int64_t grid_n = 0;
};

struct DeviationOptions {
  std::int64_t n = 2048;
  double floor = 1e-8;  // compare only where t^{2/alpha} u exceeds this
  unsigned threads = 0;
};

[[nodiscard]] DeviationResult rescaled_deviation(double s, double t, const DeviationOptions& options = {});

// sum_{k<=N} (2k^3 + k) / (3 k^s).
[[nodiscard]] double truncation_coefficient(double s, std::int64_t order);
// (2 / (3 (4-s))) N^{4-s}, 2 < s < 4.
[[nodiscard]] double truncation_growth(double s, std::int64_t order);
// (2 zeta(s-3) + zeta(s-1)) / 3, s > 4.
[[nodiscard]] double truncation_limit(double s);

// Width prefactors for a diffusive limit with diffusion coefficient gamma:
// the Gaussian value 4 sqrt(gamma ln 2) and the half-size constant 2 sqrt(gamma ln 2).
[[nodiscard]] double gaussian_fwhm_prefactor(double gamma);
[[nodiscard]] double half_fwhm_prefactor(double gamma);

}  // namespace superlattice::asymptotics
