#include "superlattice/hopper.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "superlattice/errors.hpp"
#include "superlattice/parallel.hpp"
#include "superlattice/special_functions.hpp"

namespace superlattice::hopper {

namespace {

constexpr double kMaxTailMass = 1e-6;
constexpr std::int64_t kTableLimit = 4096;
constexpr std::int64_t kMaxCap = std::int64_t{1} << 52;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// integral_k^{k+1} x^{-a} dx without cancellation at large k
double cell_integral(double a, double k) {
  return std::pow(k, 1.0 - a) * -std::expm1((1.0 - a) * std::log1p(1.0 / k)) / (a - 1.0);
}

}  // namespace

Rng walker_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t mixed = splitmix64(state) ^ (index * 0xd1b54a32d192ed03ULL);
  std::uint64_t inner = mixed;
  std::seed_seq seq{splitmix64(inner), splitmix64(inner), splitmix64(inner), splitmix64(inner)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::int64_t JumpDistribution::default_cap(double s) {
  if (!(s > 2.0)) throw DomainError("exponent must exceed 2");
  const double a = s - 1.0;
  const double bound = std::pow((a - 1.0) * kMaxTailMass * special::zeta(a), -1.0 / (a - 1.0));
  return static_cast<std::int64_t>(std::min(std::ceil(bound), static_cast<double>(kMaxCap)));
}

JumpDistribution::JumpDistribution(double s, std::optional<std::int64_t> cap) : s_(s), exponent_(s - 1.0) {
  if (!(s > 2.0)) throw DomainError("exponent must exceed 2");
  cap_ = cap.value_or(default_cap(s));
  if (cap_ < 1 || cap_ > kMaxCap) throw DomainError("jump cap out of range");
  const double zeta = special::zeta(exponent_);
  total_rate_ = 4.0 * zeta;
  const double beyond = special::power_tail_sum(exponent_, cap_ + 1);
  tail_mass_ = beyond / zeta;
  if (tail_mass_ >= kMaxTailMass) throw DomainError("jump cap leaves tail mass above 1e-6");

  table_size_ = std::min(cap_, kTableLimit);
  cumulative_.resize(static_cast<std::size_t>(table_size_));
  double acc = 0.0;
  for (std::int64_t k = 1; k <= table_size_; ++k) {
    acc += std::pow(static_cast<double>(k), -exponent_);
    cumulative_[static_cast<std::size_t>(k - 1)] = acc;
  }
  table_weight_ = acc;
  if (cap_ > table_size_)
    tail_weight_ = special::power_tail_sum(exponent_, table_size_ + 1) - beyond;
  truncated_rate_ = 4.0 * (table_weight_ + tail_weight_);
  envelope_bound_ = std::pow(1.0 + 1.0 / static_cast<double>(table_size_ + 1), exponent_);
}

double JumpDistribution::probability(std::int64_t k) const {
  if (k < 1 || k > cap_) return 0.0;
  return std::pow(static_cast<double>(k), -exponent_) / (table_weight_ + tail_weight_);
}

std::int64_t JumpDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng) * (table_weight_ + tail_weight_);
  if (u < table_weight_) {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::int64_t>(static_cast<std::int64_t>(it - cumulative_.begin()) + 1, table_size_);
  }
  // continuous envelope x^{-a} on [K0 + 1, cap + 1), k = floor(x)
  const double a = exponent_;
  const double lo = std::pow(static_cast<double>(table_size_ + 1), 1.0 - a);
  const double hi = std::pow(static_cast<double>(cap_) + 1.0, 1.0 - a);
  while (true) {
    const double x = std::pow(lo - uniform01(rng) * (lo - hi), 1.0 / (1.0 - a));
    const auto k = std::clamp(static_cast<std::int64_t>(x), table_size_ + 1, cap_);
    const double kd = static_cast<double>(k);
    const double ratio = std::pow(kd, -a) / cell_integral(a, kd);
    if (uniform01(rng) * envelope_bound_ <= ratio) return k;
  }
}

double JumpDistribution::sample_wait(Rng& rng) const { return -std::log1p(-uniform01(rng)) / truncated_rate_; }

std::int64_t Histogram2D::at(Point p) const {
  if (!window.contains(p)) return 0;
  return counts[static_cast<std::size_t>((p.x - window.origin.x) * window.extent.height + (p.y - window.origin.y))];
}

std::int64_t Histogram2D::in_window() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

HopperRun simulate(const HopperConfig& config, unsigned threads) {
  if (!(config.t_final >= 0.0) || !std::isfinite(config.t_final)) throw DomainError("final time must be >= 0");
  if (config.n_walkers < 1) throw DomainError("need at least one walker");
  if (config.window.extent.width < 1 || config.window.extent.height < 1) throw DomainError("empty histogram window");
  const JumpDistribution law(config.s, config.k_cap);

  HopperRun run;
  run.k_cap = law.cap();
  run.tail_mass = law.tail_mass();
  run.truncated_rate = law.truncated_rate();
  run.positions.resize(static_cast<std::size_t>(config.n_walkers));
  std::vector<std::int64_t> jumps(static_cast<std::size_t>(config.n_walkers), 0);

  parallel_for(run.positions.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      Rng rng = walker_rng(config.seed, w);
      Point pos;
      double time = law.sample_wait(rng);
      std::int64_t count = 0;
      while (time <= config.t_final) {
        const std::int64_t k = law.sample(rng);
        std::uniform_int_distribution<std::int64_t> pick(0, 4 * k - 1);
        const Point step = lattice::ring_offset(k, pick(rng));
        pos.x += step.x;
        pos.y += step.y;
        ++count;
        time += law.sample_wait(rng);
      }
      run.positions[w] = pos;
      jumps[w] = count;
    }
  });

  Histogram2D& h = run.histogram;
  h.window = config.window;
  h.counts.assign(static_cast<std::size_t>(config.window.extent.width * config.window.extent.height), 0);
  h.n_total = config.n_walkers;
  for (const Point& p : run.positions) {
    if (config.window.contains(p))
      ++h.counts[static_cast<std::size_t>((p.x - h.window.origin.x) * h.window.extent.height +
                                          (p.y - h.window.origin.y))];
    else
      ++h.out_of_window;
  }
  run.jumps = std::accumulate(jumps.begin(), jumps.end(), std::int64_t{0});
  return run;
}

double tv_distance(const Histogram2D& histogram, const lattice::LatticeField& field) {
  if (field.stride() != 1) throw DomainError("comparison field must have unit stride");
  const Window a = histogram.window;
  const Window b = field.window();
  const std::int64_t x0 = std::max(a.origin.x, b.origin.x);
  const std::int64_t y0 = std::max(a.origin.y, b.origin.y);
  const std::int64_t x1 = std::min(a.origin.x + a.extent.width, b.origin.x + b.extent.width);
  const std::int64_t y1 = std::min(a.origin.y + a.extent.height, b.origin.y + b.extent.height);
  if (x0 >= x1 || y0 >= y1) throw DomainError("histogram and field windows do not intersect");

  double count_sum = 0.0;
  double field_sum = 0.0;
  for (std::int64_t x = x0; x < x1; ++x)
    for (std::int64_t y = y0; y < y1; ++y) {
      count_sum += static_cast<double>(histogram.at({x, y}));
      field_sum += field.at({x, y});
    }
  if (count_sum <= 0.0 || field_sum <= 0.0) throw DomainError("no mass inside the common window");
  double dist = 0.0;
  for (std::int64_t x = x0; x < x1; ++x)
    for (std::int64_t y = y0; y < y1; ++y)
      dist += std::abs(static_cast<double>(histogram.at({x, y})) / count_sum - field.at({x, y}) / field_sum);
  return 0.5 * dist;
}

ChiSquareResult chi_square_test(std::span<const std::int64_t> observed, std::span<const double> probabilities,
                                std::int64_t total, double significance) {
  if (observed.size() != probabilities.size() || observed.empty()) throw DomainError("bin count mismatch");
  if (total < 1) throw DomainError("no draws");
  if (!(significance > 0.0 && significance < 1.0)) throw DomainError("significance must lie in (0, 1)");
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> expected;
  double seen = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    expected.push_back(probabilities[i] * static_cast<double>(total));
    seen += obs[i];
    mass += probabilities[i];
  }
  if (mass < 1.0 - 1e-12) {
    obs.push_back(static_cast<double>(total) - seen);
    expected.push_back((1.0 - mass) * static_cast<double>(total));
  }

  std::vector<std::pair<double, double>> pooled;
  double po = 0.0;
  double pe = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    po += obs[i];
    pe += expected[i];
    if (pe >= 5.0) {
      pooled.emplace_back(po, pe);
      po = pe = 0.0;
    }
  }
  if (pe > 0.0) {
    if (pooled.empty()) pooled.emplace_back(po, pe);
    else {
      pooled.back().first += po;
      pooled.back().second += pe;
    }
  }
  if (pooled.size() < 2) throw DomainError("too few populated bins for a chi-square test");

  ChiSquareResult out;
  for (const auto& [o, e] : pooled) out.statistic += (o - e) * (o - e) / e;
  out.degrees_of_freedom = static_cast<int>(pooled.size()) - 1;
  const boost::math::chi_squared_distribution<double> law(out.degrees_of_freedom);
  out.critical_value = boost::math::quantile(boost::math::complement(law, significance));
  out.p_value = boost::math::cdf(boost::math::complement(law, out.statistic));
  return out;
}

}  // namespace superlattice::hopper
