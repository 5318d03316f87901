#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace superlattice::symbol {

// Mellin exponent plus an optional truncation order N (sum over k <= N).
class SymbolSpec {
 public:
  [[nodiscard]] static SymbolSpec infinite(double s);
  [[nodiscard]] static SymbolSpec at_order(double s, std::int64_t order);

  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] bool is_infinite() const noexcept { return !order_; }
  [[nodiscard]] std::optional<std::int64_t> order() const noexcept { return order_; }

  // Stability index of the long-time limit: s-2 for 2<s<4, 2 for s>4 and for
  // every finite truncation. Throws DomainError at s = 4 (infinite case).
  [[nodiscard]] double alpha() const;

 private:
  SymbolSpec(double s, std::optional<std::int64_t> order);
  double s_ = 3.0;
  std::optional<std::int64_t> order_;
};

// Diagonal evaluates the diagonal formula at the angle whose cosine is the
// mean of cos|p| and cos|q| (exact on |p| = |q|).
enum class Branch { Automatic, OffDiagonal, Diagonal };

// Every symbol here has the form built from three functions of one magnitude:
//   off-diagonal  A + 2 (sin a S(a) - sin b S(b)) / (cos a - cos b)
//   diagonal      A - 2 cot a S(a) - 2 C(a)
// with a = |p|, b = |q| and S' = C.
struct RadialTerms {
  double sine = 0.0;    // S(a)
  double cosine = 0.0;  // C(a)
};

class Kernel {
 public:
  virtual ~Kernel() = default;
  [[nodiscard]] virtual double constant() const = 0;
  [[nodiscard]] virtual RadialTerms radial(double a) const = 0;
};

[[nodiscard]] std::unique_ptr<Kernel> path_kernel(std::int64_t k);
[[nodiscard]] std::unique_ptr<Kernel> make_kernel(const SymbolSpec& spec);

class SymbolEvaluator {
 public:
  explicit SymbolEvaluator(std::unique_ptr<Kernel> kernel);
  explicit SymbolEvaluator(const SymbolSpec& spec) : SymbolEvaluator(make_kernel(spec)) {}

  [[nodiscard]] double operator()(double p, double q) const { return evaluate(p, q, Branch::Automatic); }
  [[nodiscard]] double evaluate(double p, double q, Branch branch) const;

  [[nodiscard]] double constant() const noexcept { return constant_; }
  [[nodiscard]] RadialTerms radial(double a) const { return kernel_->radial(a); }

  // Combination step with terms precomputed at a = |p| and b = |q|.
  // same_magnitude marks a == b exactly (decided by the caller, e.g. on integer mesh indices).
  [[nodiscard]] double combine(double a, const RadialTerms& ta, double b, const RadialTerms& tb,
                               bool same_magnitude) const;

 private:
  [[nodiscard]] double diagonal(double a, const RadialTerms& t) const;
  [[nodiscard]] double near_diagonal(double a, double b) const;
  [[nodiscard]] double off_diagonal(double a, const RadialTerms& ta, double b, const RadialTerms& tb) const;

  std::unique_ptr<Kernel> kernel_;
  double constant_;
  RadialTerms at_pi_;
};

// lambda_k(p, q), the symbol of the k-path Laplacian.
[[nodiscard]] double lambda_k(std::int64_t k, double p, double q);
// Symbol of the (possibly truncated) Mellin operator.
[[nodiscard]] double lambda_mellin(const SymbolSpec& spec, double p, double q);

// Samples on the product mesh (h * index[i], h * index[j]), row-major i * size + j.
// Equal |index| is treated as an exact diagonal.
[[nodiscard]] std::vector<double> sample_product_mesh(const SymbolEvaluator& eval,
                                                      std::span<const std::int64_t> index, double h,
                                                      unsigned threads = 0);

// n x n samples at p_i = -pi + 2 pi i / n, q_j = -pi + 2 pi j / n.
struct GridField {
  std::int64_t n = 0;
  std::vector<double> samples;

  [[nodiscard]] double node(std::int64_t i) const noexcept;
  [[nodiscard]] double at(std::int64_t i, std::int64_t j) const {
    return samples[static_cast<std::size_t>(i * n + j)];
  }
};

[[nodiscard]] GridField symbol_grid(const SymbolSpec& spec, std::int64_t n, unsigned threads = 0);

}  // namespace superlattice::symbol
