#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "superlattice/lattice.hpp"

namespace superlattice::hopper {

using lattice::Point;
using lattice::Window;

using Rng = std::mt19937_64;

// Independent stream for walker `index`, mixed from (seed, index) by splitmix64.
[[nodiscard]] Rng walker_rng(std::uint64_t seed, std::uint64_t index);
// Uniform in [0, 1) from the top 53 bits.
[[nodiscard]] double uniform01(Rng& rng);

/// Law of the jump distance: P(k) proportional to 4k * k^{-s} for k <= cap.
/// Small distances come from a cumulative table, the rest by rejection from
/// a continuous power-law envelope, so caps near 10^12 cost nothing extra.
class JumpDistribution {
 public:
  JumpDistribution(double s, std::optional<std::int64_t> cap = std::nullopt);

  // Smallest cap whose normalised tail mass is below 1e-6 (integral bound).
  [[nodiscard]] static std::int64_t default_cap(double s);

  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] std::int64_t cap() const noexcept { return cap_; }
  [[nodiscard]] double total_rate() const noexcept { return total_rate_; }          // 4 zeta(s-1)
  [[nodiscard]] double truncated_rate() const noexcept { return truncated_rate_; }  // 4 sum_{k<=cap} k^{1-s}
  [[nodiscard]] double tail_mass() const noexcept { return tail_mass_; }
  [[nodiscard]] double probability(std::int64_t k) const;

  [[nodiscard]] std::int64_t sample(Rng& rng) const;
  [[nodiscard]] double sample_wait(Rng& rng) const;

 private:
  double s_;
  double exponent_;  // s - 1
  std::int64_t cap_;
  std::int64_t table_size_;
  std::vector<double> cumulative_;  // unnormalised, index k-1
  double table_weight_ = 0.0;
  double tail_weight_ = 0.0;
  double total_rate_ = 0.0;
  double truncated_rate_ = 0.0;
  double tail_mass_ = 0.0;
  double envelope_bound_ = 1.0;
};

struct HopperConfig {
  double s = 3.0;
  double t_final = 1.0;
  std::int64_t n_walkers = 1000;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> k_cap;
  Window window = Window::centered(20);
};

struct Histogram2D {
  Window window;
  std::vector<std::int64_t> counts;  // x-major over the window
  std::int64_t n_total = 0;
  std::int64_t out_of_window = 0;

  [[nodiscard]] std::int64_t at(Point p) const;
  [[nodiscard]] std::int64_t in_window() const;
};

struct HopperRun {
  Histogram2D histogram;
  std::vector<Point> positions;  // final position of every walker, by index
  std::int64_t k_cap = 0;
  double tail_mass = 0.0;
  double truncated_rate = 0.0;
  std::int64_t jumps = 0;
};

[[nodiscard]] HopperRun simulate(const HopperConfig& config, unsigned threads = 0);

// Half the l1 distance between the histogram and the field, both restricted
// to their common window and renormalised there. Field must have unit stride.
[[nodiscard]] double tv_distance(const Histogram2D& histogram, const lattice::LatticeField& field);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double critical_value = 0.0;
  double p_value = 0.0;
  [[nodiscard]] bool accepted() const noexcept { return statistic <= critical_value; }
};

// Pearson test of observed counts against bin probabilities out of `total`
// draws. Probabilities may sum to less than one; the remainder becomes an
// extra bin. Adjacent bins with an expected count below 5 are pooled.
[[nodiscard]] ChiSquareResult chi_square_test(std::span<const std::int64_t> observed,
                                              std::span<const double> probabilities, std::int64_t total,
                                              double significance);

}  // namespace superlattice::hopper
