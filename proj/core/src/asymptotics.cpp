#include "superlattice/asymptotics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "superlattice/errors.hpp"
#include "superlattice/fourier.hpp"
#include "superlattice/parallel.hpp"
#include "superlattice/special_functions.hpp"

namespace superlattice::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailLevel = 27.631021115928547;  // ln 1e12

void check_exponent(double s) {
  if (!(s > 2.0)) throw DomainError("exponent must exceed 2");
  if (std::abs(s - 4.0) < special::kIntegerTolerance) throw DomainError("s = 4 is excluded");
}

// h1 with C_s precomputed; a, b >= 0.
double h1_scaled(double c, double s, double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == 0.0) return 0.0;
  const double base = c * std::pow(hi, s - 2.0);
  if (lo == 0.0) return base;
  const double gap = std::log(hi / lo);
  if (gap == 0.0) return 0.5 * s * base;
  // (1 - r^s) / (1 - r^2) with r = lo / hi
  return base * std::expm1(-s * gap) / std::expm1(-2.0 * gap);
}

std::int64_t next_pow2(std::int64_t x) {
  return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(std::max<std::int64_t>(x, 1))));
}

// Inverse DFT of exponent samples e^{-phase(|i|, |j|)} on the n x n mesh with
// frequency spacing 2 pi / (n * spacing), read back on the xi mesh.
template <class Exponent>
LimitProfile invert(double s, double spacing, std::int64_t n, std::int64_t radius, unsigned threads,
                    Exponent&& exponent) {
  if (n < 2 * radius + 2) throw DomainError("profile window exceeds the transform size");
  fourier::Fft2D fft(n);
  auto data = fft.data();
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto ki = static_cast<std::int64_t>(i);
      const std::int64_t mi = std::abs(ki < n / 2 ? ki : ki - n);
      for (std::int64_t j = 0; j < n; ++j) {
        const std::int64_t mj = std::abs(j < n / 2 ? j : j - n);
        data[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = std::exp(-exponent(mi, mj));
      }
    }
  });
  fft.backward();
  const double scale = 1.0 / (static_cast<double>(n) * spacing * static_cast<double>(n) * spacing);
  double residue = 0.0;
  double total = 0.0;
  for (const auto& z : data) {
    residue = std::max(residue, std::abs(z.imag()));
    total += z.real();
  }
  if (residue * scale > 1e-10) throw AccuracyError("imaginary residue of the profile inversion exceeds tolerance");

  LimitProfile out;
  out.s = s;
  out.alpha = scaling_order(s);
  out.spacing = spacing;
  out.radius = radius;
  out.grid_mass = total * scale * spacing * spacing;
  out.values.resize(static_cast<std::size_t>(out.side() * out.side()));
  auto wrap = [n](std::int64_t m) { return static_cast<std::size_t>(((m % n) + n) % n); };
  for (std::int64_t i = -radius; i <= radius; ++i)
    for (std::int64_t j = -radius; j <= radius; ++j)
      out.values[static_cast<std::size_t>((i + radius) * out.side() + (j + radius))] =
          data[wrap(i) * static_cast<std::size_t>(n) + wrap(j)].real() * scale;
  return out;
}

// Heavy power-law tails alias strongly, so the stable case takes the largest period allowed.
std::int64_t profile_size(const ProfileOptions& options, std::int64_t radius, bool heavy_tail) {
  if (options.n) return *options.n;
  if (heavy_tail) return std::max(options.max_n, next_pow2(2 * radius + 2));
  return std::min(options.max_n, std::max<std::int64_t>(1024, next_pow2(2 * radius + 2)));
}

LimitProfile stable_profile(double s, double spacing, std::int64_t n, std::int64_t radius, unsigned threads) {
  if (kPi / spacing < profile_cutoff(s))
    throw AccuracyError("profile mesh too coarse: frequency box misses the 1e-12 tail level");
  const double c = special::c_coefficient(s);
  const double dv = 2.0 * kPi / (static_cast<double>(n) * spacing);
  return invert(s, spacing, n, radius, threads, [&](std::int64_t mi, std::int64_t mj) {
    return h1_scaled(c, s, dv * static_cast<double>(mi), dv * static_cast<double>(mj));
  });
}

}  // namespace

double scaling_order(double s) {
  check_exponent(s);
  return s < 4.0 ? s - 2.0 : 2.0;
}

double h1(double s, double p, double q) {
  check_exponent(s);
  return h1_scaled(special::c_coefficient(s), s, std::abs(p), std::abs(q));
}

double h2(double s, double p, double q) {
  if (!(s > 4.0)) throw DomainError("quadratic limit symbol needs s > 4");
  return gamma_coefficient(s) * (p * p + q * q);
}

double gamma_coefficient(double s) {
  check_exponent(s);
  return (special::zeta(s - 1.0) + 2.0 * special::zeta_continued(s - 3.0)) / 3.0;
}

double h1_lower_bound_constant(double s) {
  check_exponent(s);
  if (s > 4.0) throw DomainError("lower bound constant is defined for 2 < s < 4");
  const double alpha = s - 2.0;
  const double c = special::c_coefficient(s);
  double least = std::numeric_limits<double>::infinity();
  constexpr int kSteps = 2000;
  for (int i = 0; i <= kSteps; ++i) {
    const double phi = 0.25 * kPi * i / kSteps;
    const double x = std::cos(phi);
    const double y = std::sin(phi);
    least = std::min(least, h1_scaled(c, s, x, y) / (std::pow(x, alpha) + std::pow(y, alpha)));
  }
  return 0.95 * least;
}

double profile_cutoff(double s) {
  return std::pow(kTailLevel / h1_lower_bound_constant(s), 1.0 / (s - 2.0));
}

double LimitProfile::integral() const noexcept {
  return std::accumulate(values.begin(), values.end(), 0.0) * spacing * spacing;
}

double gaussian_profile(double s, double xi, double eta) {
  const double gamma = gamma_coefficient(s);
  return std::exp(-(xi * xi + eta * eta) / (4.0 * gamma)) / (4.0 * kPi * gamma);
}

LimitProfile limit_profile(double s, double extent, double spacing, const ProfileOptions& options) {
  check_exponent(s);
  if (!(spacing > 0.0) || !(extent >= 0.0)) throw DomainError("profile spacing must be positive");
  const auto radius = static_cast<std::int64_t>(std::ceil(extent / spacing));
  if (s < 4.0) return stable_profile(s, spacing, profile_size(options, radius, true), radius, options.threads);

  LimitProfile out;
  out.s = s;
  out.alpha = 2.0;
  out.spacing = spacing;
  out.radius = radius;
  out.values.resize(static_cast<std::size_t>(out.side() * out.side()));
  for (std::int64_t i = -radius; i <= radius; ++i)
    for (std::int64_t j = -radius; j <= radius; ++j)
      out.values[static_cast<std::size_t>((i + radius) * out.side() + (j + radius))] =
          gaussian_profile(s, spacing * static_cast<double>(i), spacing * static_cast<double>(j));
  return out;
}

LimitProfile gaussian_profile_numeric(double s, double extent, double spacing, const ProfileOptions& options) {
  const double gamma = gamma_coefficient(s);
  if (!(s > 4.0)) throw DomainError("Gaussian limit needs s > 4");
  if (!(spacing > 0.0) || !(extent >= 0.0)) throw DomainError("profile spacing must be positive");
  if (gamma * (kPi / spacing) * (kPi / spacing) < kTailLevel)
    throw AccuracyError("profile mesh too coarse: frequency box misses the 1e-12 tail level");
  const auto radius = static_cast<std::int64_t>(std::ceil(extent / spacing));
  const std::int64_t n = profile_size(options, radius, false);
  const double dv = 2.0 * kPi / (static_cast<double>(n) * spacing);
  return invert(s, spacing, n, radius, options.threads, [&](std::int64_t mi, std::int64_t mj) {
    return gamma * dv * dv * static_cast<double>(mi * mi + mj * mj);
  });
}

WidthMeasurement fwhm(std::vector<RadialSample> samples, double center) {
  if (!(center > 0.0)) throw FlatFieldError("central value must be positive");
  if (samples.empty()) throw FlatFieldError("no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.value < b.value; });
  if (lo->value == hi->value) throw FlatFieldError("field is constant");

  const double half = 0.5 * center;
  double last_above = 0.0;
  double outermost = 0.0;
  for (const auto& sample : samples) {
    outermost = std::max(outermost, sample.radius);
    if (sample.value > half) last_above = std::max(last_above, sample.radius);
  }
  double beyond = std::numeric_limits<double>::infinity();
  for (const auto& sample : samples)
    if (sample.radius > last_above) beyond = std::min(beyond, sample.radius);
  if (!std::isfinite(beyond)) return {2.0 * outermost, false};
  return {2.0 * beyond, true};
}

WidthMeasurement fwhm(const LatticeField& field) {
  if (!field.has_sample({0, 0})) throw DomainError("field does not sample the origin");
  std::vector<RadialSample> samples;
  samples.reserve(field.values().size());
  for (std::int64_t i = 0; i < field.width(); ++i)
    for (std::int64_t j = 0; j < field.height(); ++j) {
      const auto p = field.site(i, j);
      samples.push_back({std::hypot(static_cast<double>(p.x), static_cast<double>(p.y)), field.sample(i, j)});
    }
  return fwhm(std::move(samples), field.at({0, 0}));
}

WidthMeasurement fwhm(const LimitProfile& profile) {
  std::vector<RadialSample> samples;
  samples.reserve(profile.values.size());
  for (std::int64_t i = -profile.radius; i <= profile.radius; ++i)
    for (std::int64_t j = -profile.radius; j <= profile.radius; ++j)
      samples.push_back({profile.spacing * std::hypot(static_cast<double>(i), static_cast<double>(j)), profile.at(i, j)});
  return fwhm(std::move(samples), profile.at(0, 0));
}

ScalingFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw DomainError("an exponent fit needs at least 4 points");
  const auto count = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [t, w] : points) {
    if (!(t > 0.0) || !(w > 0.0)) throw DomainError("fit points must be positive");
    mx += std::log(t);
    my += std::log(w);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [t, w] : points) {
    sxx += (std::log(t) - mx) * (std::log(t) - mx);
    sxy += (std::log(t) - mx) * (std::log(w) - my);
  }
  if (sxx <= 0.0) throw DomainError("degenerate abscissae: all times equal");
  ScalingFit fit;
  fit.kappa = sxy / sxx;
  const double intercept = my - fit.kappa * mx;
  fit.c = std::exp(intercept);
  double ssr = 0.0;
  for (const auto& [t, w] : points) {
    const double r = std::log(w) - intercept - fit.kappa * std::log(t);
    ssr += r * r;
  }
  fit.stderr_kappa = std::sqrt(ssr / (count - 2.0) / sxx);
  fit.points.assign(points.begin(), points.end());
  return fit;
}

double fit_prefactor(std::span<const std::pair<double, double>> points, double kappa) {
  if (points.empty()) throw DomainError("no points to fit");
  double sum = 0.0;
  for (const auto& [t, w] : points) {
    if (!(t > 0.0) || !(w > 0.0)) throw DomainError("fit points must be positive");
    sum += std::log(w) - kappa * std::log(t);
  }
  return std::exp(sum / static_cast<double>(points.size()));
}

WidthMeasurement measure_fwhm(const SymbolSpec& spec, double t, const WidthOptions& options) {
  if (!(t > 0.0)) throw DomainError("width measurement needs t > 0");
  const double reach = options.window_scale * evolution::spread_length(spec, t);
  const auto radius = static_cast<std::int64_t>(std::ceil(std::min(reach, 1e15)));
  evolution::GridOptions grid;
  grid.refine = false;
  grid.threads = options.threads;
  const auto result = evolution::spectral_solve_delta(spec, t, radius, grid);
  return fwhm(result.field);
}

std::vector<std::pair<double, double>> fwhm_series(const SymbolSpec& spec, std::span<const double> times,
                                                   const WidthOptions& options) {
  std::vector<std::pair<double, double>> out;
  out.reserve(times.size());
  for (double t : times) out.emplace_back(t, measure_fwhm(spec, t, options).width);
  return out;
}

DeviationResult rescaled_deviation(double s, double t, const DeviationOptions& options) {
  const double alpha = scaling_order(s);
  if (!(t > 0.0)) throw DomainError("deviation needs t > 0");
  const double scale = std::pow(t, 1.0 / alpha);
  const double target = s > 4.0 ? 0.25 : kPi / profile_cutoff(s);
  const auto stride = static_cast<std::int64_t>(std::max(1.0, std::floor(target * scale)));
  const double spacing = static_cast<double>(stride) / scale;
  const std::int64_t n = options.n;
  const std::int64_t radius = n / 2 - 1;

  evolution::GridOptions grid;
  grid.n = n;
  grid.stride = stride;
  grid.threads = options.threads;
  const auto u = evolution::spectral_solve_delta(SymbolSpec::infinite(s), t, radius * stride, grid);

  DeviationResult out;
  out.t = t;
  out.spacing = spacing;
  out.stride = stride;
  out.grid_n = n;
  const double weight = scale * scale;
  std::optional<LimitProfile> profile;
  if (s < 4.0) profile = stable_profile(s, spacing, n, radius, options.threads);
  auto limit = [&](std::int64_t i, std::int64_t j) {
    if (profile) return profile->at(i, j);
    return gaussian_profile(s, spacing * static_cast<double>(i), spacing * static_cast<double>(j));
  };
  out.profile_center = limit(0, 0);
  const std::int64_t m = u.field.width() / 2;
  for (std::int64_t i = -m; i <= m; ++i)
    for (std::int64_t j = -m; j <= m; ++j) {
      const double scaled = weight * u.field.sample(i + m, j + m);
      if (scaled <= options.floor) continue;
      out.deviation = std::max(out.deviation, std::abs(scaled - limit(i, j)));
    }
  return out;
}

double truncation_coefficient(double s, std::int64_t order) {
  if (!(s > 2.0)) throw DomainError("exponent must exceed 2");
  if (order < 1) throw DomainError("truncation order must be >= 1");
  double sum = 0.0;
  for (std::int64_t k = order; k >= 1; --k) {
    const auto kd = static_cast<double>(k);
    sum += (2.0 * kd * kd * kd + kd) / (3.0 * std::pow(kd, s));
  }
  return sum;
}

double truncation_growth(double s, std::int64_t order) {
  if (!(s > 2.0 && s < 4.0)) throw DomainError("growth law holds for 2 < s < 4");
  return 2.0 / (3.0 * (4.0 - s)) * std::pow(static_cast<double>(order), 4.0 - s);
}

double truncation_limit(double s) {
  if (!(s > 4.0)) throw DomainError("limit exists for s > 4");
  return (2.0 * special::zeta(s - 3.0) + special::zeta(s - 1.0)) / 3.0;
}

double gaussian_fwhm_prefactor(double gamma) { return 4.0 * std::sqrt(gamma * std::numbers::ln2); }
double half_fwhm_prefactor(double gamma) { return 2.0 * std::sqrt(gamma * std::numbers::ln2); }

}  // namespace superlattice::asymptotics
