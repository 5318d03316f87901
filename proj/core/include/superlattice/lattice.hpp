#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace superlattice::lattice {

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Extent {
  std::int64_t width = 0;
  std::int64_t height = 0;
  friend bool operator==(const Extent&, const Extent&) = default;
};

// Rectangular block of lattice sites [x0, x0 + width) x [y0, y0 + height).
struct Window {
  Point origin;
  Extent extent;

  [[nodiscard]] bool contains(Point p) const noexcept {
    return p.x >= origin.x && p.x < origin.x + extent.width && p.y >= origin.y &&
           p.y < origin.y + extent.height;
  }
  // Square window [-radius, radius]^2.
  [[nodiscard]] static Window centered(std::int64_t radius) {
    return {{-radius, -radius}, {2 * radius + 1, 2 * radius + 1}};
  }
};

// Offsets at Manhattan distance exactly k, in the j-loop order of the
// shift representation of L_k: (k-j, j), (-k+j, -j), (-j, k-j), (j, -k+j).
struct RingOffsets {
  std::int64_t k = 0;
  std::vector<Point> offsets;
};

// index in [0, 4k).
[[nodiscard]] Point ring_offset(std::int64_t k, std::int64_t index) noexcept;
[[nodiscard]] RingOffsets manhattan_ring(std::int64_t k);

/// Finitely supported real function on Z^2, stored densely on a window and
/// zero everywhere else. Samples may live on the coarser sublattice
/// stride * Z^2 + origin; then sample (i, j) sits at origin + stride * (i, j).
/// Storage is x-major: values[i * height + j].
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(Point origin, Extent extent, std::int64_t stride = 1);
  explicit LatticeField(const Window& window) : LatticeField(window.origin, window.extent) {}

  // e_{m,n}
  [[nodiscard]] static LatticeField delta(Point at);

  [[nodiscard]] Point origin() const noexcept { return origin_; }
  [[nodiscard]] Extent extent() const noexcept { return extent_; }
  [[nodiscard]] std::int64_t width() const noexcept { return extent_.width; }
  [[nodiscard]] std::int64_t height() const noexcept { return extent_.height; }
  [[nodiscard]] std::int64_t stride() const noexcept { return stride_; }
  [[nodiscard]] Window window() const noexcept {
    return {origin_, {extent_.width * stride_ - (stride_ - 1), extent_.height * stride_ - (stride_ - 1)}};
  }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] double& sample(std::int64_t i, std::int64_t j) {
    return values_[static_cast<std::size_t>(i * extent_.height + j)];
  }
  [[nodiscard]] double sample(std::int64_t i, std::int64_t j) const {
    return values_[static_cast<std::size_t>(i * extent_.height + j)];
  }
  [[nodiscard]] Point site(std::int64_t i, std::int64_t j) const noexcept {
    return {origin_.x + stride_ * i, origin_.y + stride_ * j};
  }

  // Value at a lattice site; zero outside the window or off the sublattice.
  [[nodiscard]] double at(Point p) const noexcept;
  [[nodiscard]] bool has_sample(Point p) const noexcept;
  // Writes a site that must carry a sample.
  void set(Point p, double value);

  // Sum of the field over Z^2 (samples weighted by stride^2).
  [[nodiscard]] double mass() const noexcept;
  [[nodiscard]] double min_value() const noexcept;
  [[nodiscard]] double max_value() const noexcept;

  // Restriction to the sites inside a window (stride preserved).
  [[nodiscard]] LatticeField crop(const Window& w) const;

 private:
  Point origin_;
  Extent extent_;
  std::int64_t stride_ = 1;
  std::vector<double> values_;
};

// Sum over Z^2 of f * g. Both fields must have stride 1.
[[nodiscard]] double inner_product(const LatticeField& f, const LatticeField& g);
[[nodiscard]] double sup_distance(const LatticeField& f, const LatticeField& g);

// (L_k f)(v) = 4k f(v) - sum_{d(v,w)=k} f(w); output window grown by k.
[[nodiscard]] LatticeField apply_path_laplacian(const LatticeField& f, std::int64_t k,
                                                unsigned threads = 0);

// sum_{k<=N} k^{-s} L_k f; output window grown by N.
[[nodiscard]] LatticeField apply_mellin_truncated(const LatticeField& f, double s, std::int64_t n_terms,
                                                  unsigned threads = 0);

/// Compression P L P of the truncated Mellin operator onto a finite window.
/// Rows keep the infinite-lattice diagonal, so mass that would jump out of the
/// window is lost (absorbing boundary). Compressed-row storage.
class SparseOperator {
 public:
  SparseOperator(Window window, std::vector<std::size_t> row_start, std::vector<std::uint32_t> columns,
                 std::vector<double> entries);

  [[nodiscard]] const Window& window() const noexcept { return window_; }
  [[nodiscard]] std::size_t rows() const noexcept { return row_start_.size() - 1; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t index(Point p) const noexcept {
    return static_cast<std::size_t>((p.x - window_.origin.x) * window_.extent.height + (p.y - window_.origin.y));
  }

  // Entry (row, col); zero when absent.
  [[nodiscard]] double entry(std::size_t row, std::size_t col) const;
  [[nodiscard]] double row_sum(std::size_t row) const;
  [[nodiscard]] std::span<const std::uint32_t> row_columns(std::size_t row) const;
  [[nodiscard]] std::span<const double> row_entries(std::size_t row) const;

  // out = A x
  void apply(std::span<const double> x, std::span<double> out, unsigned threads = 0) const;

 private:
  Window window_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> columns_;
  std::vector<double> entries_;
};

[[nodiscard]] SparseOperator compress_operator(const Window& window, double s, std::int64_t n_terms);

}  // namespace superlattice::lattice
