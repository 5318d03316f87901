#include "superlattice/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "superlattice/errors.hpp"
#include "superlattice/parallel.hpp"
#include "superlattice/special_functions.hpp"

namespace superlattice::symbol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearDiagonal = 1e-6;
constexpr double kPiSnap = 1e-9;

class PathKernel final : public Kernel {
 public:
  explicit PathKernel(std::int64_t k) : k_(static_cast<double>(k)) {}
  double constant() const override { return 4.0 * k_; }
  RadialTerms radial(double a) const override { return {std::sin(k_ * a), k_ * std::cos(k_ * a)}; }

 private:
  double k_;
};

class TruncatedMellinKernel final : public Kernel {
 public:
  TruncatedMellinKernel(double s, std::int64_t order) {
    weights_.reserve(static_cast<std::size_t>(order));
    for (std::int64_t k = 1; k <= order; ++k) weights_.push_back(std::pow(static_cast<double>(k), -s));
    // smallest terms first
    for (std::size_t i = weights_.size(); i-- > 0;) constant_ += 4.0 * static_cast<double>(i + 1) * weights_[i];
  }
  double constant() const override { return constant_; }
  RadialTerms radial(double a) const override {
    RadialTerms t;
    for (std::size_t i = weights_.size(); i-- > 0;) {
      const double k = static_cast<double>(i + 1);
      t.sine += weights_[i] * std::sin(k * a);
      t.cosine += k * weights_[i] * std::cos(k * a);
    }
    return t;
  }

 private:
  std::vector<double> weights_;
  double constant_ = 0.0;
};

class MellinKernel final : public Kernel {
 public:
  explicit MellinKernel(double s) : li_s_(s), li_s_minus_one_(s - 1.0), constant_(4.0 * special::zeta(s - 1.0)) {}
  double constant() const override { return constant_; }
  RadialTerms radial(double a) const override { return {li_s_(a).imag(), li_s_minus_one_(a).real()}; }

 private:
  special::CirclePolylog li_s_;
  special::CirclePolylog li_s_minus_one_;
  double constant_;
};

}  // namespace

SymbolSpec::SymbolSpec(double s, std::optional<std::int64_t> order) : s_(s), order_(order) {
  if (!(s > 2.0)) throw DomainError("Mellin exponent must exceed 2");
  if (order && *order < 1) throw DomainError("truncation order must be >= 1");
}

SymbolSpec SymbolSpec::infinite(double s) { return {s, std::nullopt}; }
SymbolSpec SymbolSpec::at_order(double s, std::int64_t order) { return {s, order}; }

double SymbolSpec::alpha() const {
  if (order_) return 2.0;
  if (std::abs(s_ - 4.0) < special::kIntegerTolerance) throw DomainError("s = 4 has no stable scaling limit here");
  return s_ < 4.0 ? s_ - 2.0 : 2.0;
}

std::unique_ptr<Kernel> path_kernel(std::int64_t k) {
  if (k < 1) throw DomainError("path length must be >= 1");
  return std::make_unique<PathKernel>(k);
}

std::unique_ptr<Kernel> make_kernel(const SymbolSpec& spec) {
  if (spec.order()) return std::make_unique<TruncatedMellinKernel>(spec.s(), *spec.order());
  return std::make_unique<MellinKernel>(spec.s());
}

SymbolEvaluator::SymbolEvaluator(std::unique_ptr<Kernel> kernel)
    : kernel_(std::move(kernel)), constant_(kernel_->constant()), at_pi_(kernel_->radial(kPi)) {}

double SymbolEvaluator::diagonal(double a, const RadialTerms& t) const {
  if (a == 0.0) return 0.0;
  if (a >= kPi - kPiSnap) return constant_ - 4.0 * at_pi_.cosine;
  return constant_ - 2.0 * t.sine / std::tan(a) - 2.0 * t.cosine;
}

double SymbolEvaluator::off_diagonal(double a, const RadialTerms& ta, double b, const RadialTerms& tb) const {
  const double m = 0.5 * (a + b);
  const double d = a - b;
  // cos a - cos b without cancellation
  const double denom = -2.0 * std::sin(m) * std::sin(0.5 * d);
  return constant_ + 2.0 * (std::sin(a) * ta.sine - std::sin(b) * tb.sine) / denom;
}

double SymbolEvaluator::combine(double a, const RadialTerms& ta, double b, const RadialTerms& tb,
                                bool same_magnitude) const {
  if (same_magnitude) return diagonal(a, ta);
  const double m = 0.5 * (a + b);
  const double d = a - b;
  const double gap = std::abs(2.0 * std::sin(m) * std::sin(0.5 * d));
  if (gap >= kNearDiagonal * std::min(1.0, m * m)) return off_diagonal(a, ta, b, tb);
  return near_diagonal(a, b);
}

double SymbolEvaluator::near_diagonal(double a, double b) const {
  const double m = 0.5 * (a + b);
  const double d = a - b;
  // diagonal formula at the angle whose cosine is the mean of cos a and cos b
  const double sm = std::sin(0.5 * m);
  const double sd = std::sin(0.25 * d);
  const double one_minus_mean = 2.0 * sm * sm + std::cos(m) * 2.0 * sd * sd;
  const double mid = 2.0 * std::asin(std::sqrt(std::clamp(0.5 * one_minus_mean, 0.0, 1.0)));
  return diagonal(mid, kernel_->radial(mid));
}

double SymbolEvaluator::evaluate(double p, double q, Branch branch) const {
  const double a = std::abs(p);
  const double b = std::abs(q);
  if (a == 0.0 && b == 0.0) return 0.0;
  switch (branch) {
    case Branch::Diagonal: return near_diagonal(a, b);
    case Branch::OffDiagonal: return off_diagonal(a, kernel_->radial(a), b, kernel_->radial(b));
    case Branch::Automatic: break;
  }
  const RadialTerms ta = kernel_->radial(a);
  if (a == b) return diagonal(a, ta);
  return combine(a, ta, b, kernel_->radial(b), false);
}

double lambda_k(std::int64_t k, double p, double q) {
  return SymbolEvaluator(path_kernel(k))(p, q);
}

double lambda_mellin(const SymbolSpec& spec, double p, double q) {
  struct Cached {
    double s;
    std::optional<std::int64_t> order;
    std::unique_ptr<SymbolEvaluator> eval;
  };
  thread_local Cached cache{0.0, std::nullopt, nullptr};
  if (!cache.eval || cache.s != spec.s() || cache.order != spec.order()) {
    cache.eval = std::make_unique<SymbolEvaluator>(spec);
    cache.s = spec.s();
    cache.order = spec.order();
  }
  return (*cache.eval)(p, q);
}

std::vector<double> sample_product_mesh(const SymbolEvaluator& eval, std::span<const std::int64_t> index, double h,
                                        unsigned threads) {
  const std::size_t size = index.size();
  std::int64_t largest = 0;
  for (std::int64_t i : index) largest = std::max(largest, std::abs(i));

  std::vector<RadialTerms> terms(static_cast<std::size_t>(largest + 1));
  parallel_for(terms.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) terms[m] = eval.radial(h * static_cast<double>(m));
  });

  std::vector<double> out(size * size);
  parallel_for(size, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto mi = static_cast<std::size_t>(std::abs(index[i]));
      const double a = h * static_cast<double>(mi);
      for (std::size_t j = 0; j < size; ++j) {
        const auto mj = static_cast<std::size_t>(std::abs(index[j]));
        double value = 0.0;
        if (mi != 0 || mj != 0)
          value = eval.combine(a, terms[mi], h * static_cast<double>(mj), terms[mj], mi == mj);
        out[i * size + j] = value;
      }
    }
  });
  return out;
}

double GridField::node(std::int64_t i) const noexcept {
  return -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
}

GridField symbol_grid(const SymbolSpec& spec, std::int64_t n, unsigned threads) {
  if (n < 8 || n % 2 != 0) throw DomainError("symbol grid size must be even and >= 8");
  std::vector<std::int64_t> index(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) index[static_cast<std::size_t>(i)] = i - n / 2;
  const SymbolEvaluator eval(spec);
  return {n, sample_product_mesh(eval, index, 2.0 * kPi / static_cast<double>(n), threads)};
}

}  // namespace superlattice::symbol
