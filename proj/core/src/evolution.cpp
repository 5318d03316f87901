#include "superlattice/evolution.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "superlattice/errors.hpp"
#include "superlattice/fourier.hpp"
#include "superlattice/parallel.hpp"

namespace superlattice::evolution {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSupportLevel = 36.0;  // e^{-36} ~ 2e-16
constexpr double kImaginaryTolerance = 1e-10;

std::int64_t next_pow2(double x) {
  const double clamped = std::clamp(x, 1.0, 1e15);
  return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(std::ceil(clamped))));
}

// First radius along direction theta where t * lambda reaches level; +inf when
// the level is never reached inside the Brillouin zone.
double level_radius(const symbol::SymbolEvaluator& eval, double t, double theta, double level) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r_max = kPi / std::max(std::abs(c), std::abs(s));
  auto value = [&](double r) { return t * eval(r * c, r * s); };
  if (value(r_max) < level) return std::numeric_limits<double>::infinity();
  double lo = 1e-300;
  double hi = r_max;
  // bisection in log r: the scales range over many decades
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-10; ++it) {
    const double mid = std::sqrt(lo * hi);
    (value(mid) < level ? lo : hi) = mid;
  }
  return hi;
}

std::vector<std::int64_t> fft_indices(std::int64_t n) {
  std::vector<std::int64_t> index(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) index[static_cast<std::size_t>(i)] = i < n / 2 ? i : i - n;
  return index;
}

std::size_t wrap(std::int64_t m, std::int64_t n) { return static_cast<std::size_t>(((m % n) + n) % n); }

// e^{-t lambda} on the mesh of (n, stride), natural FFT order.
std::vector<double> propagator(const SymbolSpec& spec, double t, const GridPlan& plan, unsigned threads) {
  const symbol::SymbolEvaluator eval(spec);
  const auto index = fft_indices(plan.n);
  const double h = 2.0 * kPi / static_cast<double>(plan.stride * plan.n);
  std::vector<double> factor = symbol::sample_product_mesh(eval, index, h, threads);
  parallel_for(factor.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) factor[i] = std::exp(-t * factor[i]);
  });
  return factor;
}

// Reads the transformed buffer back onto the window [-R, R]^2 of the sublattice.
EvolutionResult collect(double t, fourier::Fft2D& fft, const GridPlan& plan, std::int64_t radius) {
  const std::int64_t n = plan.n;
  const auto data = fft.data();
  const double scale = 1.0 / (static_cast<double>(plan.stride * n) * static_cast<double>(plan.stride * n));

  EvolutionResult result;
  result.t = t;
  result.grid_n = n;
  result.stride = plan.stride;
  double residue = 0.0;
  double total = 0.0;
  for (const auto& z : data) {
    residue = std::max(residue, std::abs(z.imag()));
    total += z.real();
  }
  result.imaginary_residue = residue * scale;
  if (result.imaginary_residue > kImaginaryTolerance)
    throw AccuracyError("imaginary residue of the Fourier inversion exceeds tolerance");
  result.captured_mass = total / (static_cast<double>(n) * static_cast<double>(n));

  const std::int64_t m = std::min(radius / plan.stride, n / 2 - 1);
  LatticeField field({-m * plan.stride, -m * plan.stride}, {2 * m + 1, 2 * m + 1}, plan.stride);
  for (std::int64_t i = 0; i <= 2 * m; ++i)
    for (std::int64_t j = 0; j <= 2 * m; ++j)
      field.sample(i, j) = data[wrap(i - m, n) * static_cast<std::size_t>(n) + wrap(j - m, n)].real() * scale;
  result.window_mass = field.mass();
  result.field = std::move(field);
  return result;
}

// sup |a - b| over sites sampled by both.
double common_sup(const LatticeField& a, const LatticeField& b) {
  double worst = 0.0;
  for (std::int64_t i = 0; i < a.width(); ++i)
    for (std::int64_t j = 0; j < a.height(); ++j) {
      const auto site = a.site(i, j);
      if (b.has_sample(site)) worst = std::max(worst, std::abs(a.sample(i, j) - b.at(site)));
    }
  return worst;
}

GridPlan plan_for(const SymbolSpec& spec, double t, std::int64_t radius, const GridOptions& options) {
  GridPlan plan;
  if (options.n) {
    plan.n = *options.n;
    plan.stride = options.stride.value_or(1);
  } else {
    plan = plan_grid(spec, t, radius, options.max_n);
    if (options.stride) {
      plan.stride = *options.stride;
      plan = {std::min(options.max_n,
                       next_pow2(std::max({64.0, 32.0 * spread_length(spec, t) / static_cast<double>(plan.stride),
                                           2.0 * static_cast<double>(radius / plan.stride) + 2.0}))),
              plan.stride};
    }
  }
  if (plan.n < 8 || plan.n % 2 != 0) throw DomainError("quadrature size must be even and >= 8");
  if (plan.stride < 1) throw DomainError("stride must be >= 1");
  return plan;
}

template <class Solve>
EvolutionResult refine_loop(const GridPlan& start, const GridOptions& options, Solve&& solve) {
  EvolutionResult current = solve(start);
  if (options.n || !options.refine) return current;
  GridPlan plan = start;
  while (true) {
    if (2 * plan.n > options.max_n)
      throw NonConvergenceError("quadrature refinement reached the grid ceiling without meeting tolerance");
    plan.n *= 2;
    EvolutionResult next = solve(plan);
    const double change = common_sup(current.field, next.field);
    next.refinement_error = change;
    if (change < options.refine_tol) return next;
    current = std::move(next);
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

}  // namespace

double spread_length(const SymbolSpec& spec, double t) {
  check_time(t);
  const symbol::SymbolEvaluator eval(spec);
  const double r = level_radius(eval, t, 0.0, 1.0);
  return std::isfinite(r) ? 1.0 / r : 1.0 / kPi;
}

GridPlan plan_grid(const SymbolSpec& spec, double t, std::int64_t window_radius, std::int64_t max_n) {
  check_time(t);
  const symbol::SymbolEvaluator eval(spec);
  double support = 0.0;
  for (int j = 0; j <= 8; ++j)
    support = std::max(support, level_radius(eval, t, 0.25 * kPi * j / 8.0, kSupportLevel));
  const double width = spread_length(spec, t);
  const double scale = std::pow(t, 1.0 / spec.alpha());

  double stride_target = std::min({kPi / support, width / 20.0, scale / 8.0});
  const auto stride = static_cast<std::int64_t>(std::max(1.0, std::floor(std::min(stride_target, 1e15))));
  const auto st = static_cast<double>(stride);
  const double wanted = std::max({64.0, 8.0 * std::ceil(scale) / st, 32.0 * width / st,
                                  2.0 * static_cast<double>(window_radius / stride) + 2.0});
  return {std::min(max_n, next_pow2(wanted)), stride};
}

EvolutionResult spectral_solve_delta(const SymbolSpec& spec, double t, std::int64_t window_radius,
                                     const GridOptions& options) {
  check_time(t);
  if (window_radius < 0) throw DomainError("window radius must be non-negative");
  const GridPlan start = plan_for(spec, t, window_radius, options);
  return refine_loop(start, options, [&](const GridPlan& plan) {
    const auto factor = propagator(spec, t, plan, options.threads);
    fourier::Fft2D fft(plan.n);
    auto data = fft.data();
    for (std::size_t i = 0; i < factor.size(); ++i) data[i] = factor[i];
    fft.backward();
    return collect(t, fft, plan, window_radius);
  });
}

EvolutionResult spectral_solve_general(const SymbolSpec& spec, double t, const LatticeField& u0,
                                       std::int64_t window_radius, const GridOptions& options) {
  check_time(t);
  if (window_radius < 0) throw DomainError("window radius must be non-negative");
  if (u0.stride() != 1 || options.stride.value_or(1) != 1)
    throw DomainError("general initial data requires unit stride");
  const auto o = u0.origin();
  const std::int64_t reach = std::max({std::abs(o.x), std::abs(o.y), std::abs(o.x + u0.width() - 1),
                                       std::abs(o.y + u0.height() - 1)});
  GridOptions unit = options;
  unit.stride = 1;
  GridPlan start = plan_for(spec, t, window_radius + reach, unit);
  if (start.n <= 2 * reach) throw DomainError("quadrature grid too small for the initial support");

  return refine_loop(start, unit, [&](const GridPlan& plan) {
    const auto factor = propagator(spec, t, plan, options.threads);
    fourier::Fft2D fft(plan.n);
    auto data = fft.data();
    std::fill(data.begin(), data.end(), 0.0);
    for (std::int64_t i = 0; i < u0.width(); ++i)
      for (std::int64_t j = 0; j < u0.height(); ++j) {
        const auto p = u0.site(i, j);
        data[wrap(p.x, plan.n) * static_cast<std::size_t>(plan.n) + wrap(p.y, plan.n)] += u0.sample(i, j);
      }
    fft.forward();
    for (std::size_t i = 0; i < factor.size(); ++i) data[i] *= factor[i];
    fft.backward();
    return collect(t, fft, plan, window_radius);
  });
}

LatticeField time_domain_solve(const lattice::Window& window, const SymbolSpec& spec, double t,
                               const LatticeField& u0, const TimeDomainOptions& options) {
  check_time(t);
  if (spec.is_infinite()) throw DomainError("time-domain integration needs a truncated operator");
  if (u0.stride() != 1) throw DomainError("initial field must have unit stride");
  if (!(options.rel_tol > 0.0)) throw DomainError("tolerance must be positive");
  const auto op = lattice::compress_operator(window, spec.s(), *spec.order());

  const std::size_t size = op.rows();
  std::vector<double> y(size, 0.0);
  for (std::int64_t i = 0; i < u0.width(); ++i)
    for (std::int64_t j = 0; j < u0.height(); ++j) {
      const double v = u0.sample(i, j);
      if (v == 0.0) continue;
      const auto p = u0.site(i, j);
      if (!window.contains(p)) throw WindowTooSmallError("initial data lies outside the integration window");
      y[op.index(p)] = v;
    }

  LatticeField out(window);
  if (t == 0.0) {
    std::copy(y.begin(), y.end(), out.values().begin());
    return out;
  }

  // Dormand-Prince 5(4) tableau
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.assign(size, 0.0);
  std::vector<double> stage(size), y_new(size);
  auto rhs = [&](const std::vector<double>& in, std::vector<double>& res) {
    op.apply(in, res, options.threads);
    for (double& v : res) v = -v;
  };

  double norm_bound = 0.0;
  for (std::size_t r = 0; r < size; ++r) {
    double row = 0.0;
    for (double e : op.row_entries(r)) row += std::abs(e);
    norm_bound = std::max(norm_bound, row);
  }
  double h = std::min(t, 1.0 / std::max(norm_bound, 1e-300));
  double time = 0.0;
  rhs(y, k[0]);
  std::int64_t steps = 0;
  while (time < t) {
    if (++steps > options.max_steps) throw NonConvergenceError("time integration exceeded its step budget");
    if (h < 1e-12 * std::max(t, 1.0)) throw NonConvergenceError("time step underflow");
    const bool last = time + h >= t;
    if (last) h = t - time;
    auto combo = [&](std::initializer_list<std::pair<int, double>> terms) {
      for (std::size_t i = 0; i < size; ++i) {
        double acc = 0.0;
        for (const auto& [idx, c] : terms) acc += c * k[static_cast<std::size_t>(idx)][i];
        stage[i] = y[i] + h * acc;
      }
    };
    combo({{0, a21}});
    rhs(stage, k[1]);
    combo({{0, a31}, {1, a32}});
    rhs(stage, k[2]);
    combo({{0, a41}, {1, a42}, {2, a43}});
    rhs(stage, k[3]);
    combo({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    rhs(stage, k[4]);
    combo({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    rhs(stage, k[5]);
    for (std::size_t i = 0; i < size; ++i)
      y_new[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    rhs(y_new, k[6]);

    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                            e7 * k[6][i]);
      err = std::max(err, std::abs(e));
      scale = std::max({scale, std::abs(y[i]), std::abs(y_new[i])});
    }
    const double ratio = err / (options.rel_tol * std::max(scale, 1e-300));
    if (ratio <= 1.0) {
      time = last ? t : time + h;
      y.swap(y_new);
      k[0].swap(k[6]);
    }
    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= factor;
  }
  std::copy(y.begin(), y.end(), out.values().begin());
  return out;
}

}  // namespace superlattice::evolution
