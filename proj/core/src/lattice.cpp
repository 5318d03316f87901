#include "superlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "superlattice/errors.hpp"
#include "superlattice/parallel.hpp"

namespace superlattice::lattice {

Point ring_offset(std::int64_t k, std::int64_t index) noexcept {
  const std::int64_t family = index / k;
  const std::int64_t j = index % k;
  switch (family) {
    case 0: return {k - j, j};
    case 1: return {-k + j, -j};
    case 2: return {-j, k - j};
    default: return {j, -k + j};
  }
}

RingOffsets manhattan_ring(std::int64_t k) {
  if (k < 1) throw DomainError("ring distance must be >= 1");
  RingOffsets ring{k, {}};
  ring.offsets.reserve(static_cast<std::size_t>(4 * k));
  for (std::int64_t i = 0; i < 4 * k; ++i) ring.offsets.push_back(ring_offset(k, i));
  return ring;
}

LatticeField::LatticeField(Point origin, Extent extent, std::int64_t stride)
    : origin_(origin), extent_(extent), stride_(stride) {
  if (extent.width < 0 || extent.height < 0) throw DomainError("negative field extent");
  if (stride < 1) throw DomainError("field stride must be >= 1");
  values_.assign(static_cast<std::size_t>(extent.width * extent.height), 0.0);
}

LatticeField LatticeField::delta(Point at) {
  LatticeField f(at, {1, 1});
  f.values_[0] = 1.0;
  return f;
}

bool LatticeField::has_sample(Point p) const noexcept {
  const std::int64_t dx = p.x - origin_.x;
  const std::int64_t dy = p.y - origin_.y;
  if (dx < 0 || dy < 0 || dx % stride_ != 0 || dy % stride_ != 0) return false;
  return dx / stride_ < extent_.width && dy / stride_ < extent_.height;
}

double LatticeField::at(Point p) const noexcept {
  if (!has_sample(p)) return 0.0;
  return sample((p.x - origin_.x) / stride_, (p.y - origin_.y) / stride_);
}

void LatticeField::set(Point p, double value) {
  if (!has_sample(p)) throw DomainError("site carries no sample in this field");
  sample((p.x - origin_.x) / stride_, (p.y - origin_.y) / stride_) = value;
}

double LatticeField::mass() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * static_cast<double>(stride_ * stride_);
}

double LatticeField::min_value() const noexcept {
  if (values_.empty()) return 0.0;
  return *std::min_element(values_.begin(), values_.end());
}

double LatticeField::max_value() const noexcept {
  if (values_.empty()) return 0.0;
  return *std::max_element(values_.begin(), values_.end());
}

LatticeField LatticeField::crop(const Window& w) const {
  // first sample index >= lo, last sample index <= hi
  auto range = [&](std::int64_t o, std::int64_t n, std::int64_t lo, std::int64_t hi) {
    std::int64_t first = lo <= o ? 0 : (lo - o + stride_ - 1) / stride_;
    std::int64_t last = hi < o ? -1 : std::min(n - 1, (hi - o) / stride_);
    return std::pair{first, std::max(last - first + 1, std::int64_t{0})};
  };
  const auto [i0, nw] = range(origin_.x, extent_.width, w.origin.x, w.origin.x + w.extent.width - 1);
  const auto [j0, nh] = range(origin_.y, extent_.height, w.origin.y, w.origin.y + w.extent.height - 1);
  LatticeField out(site(i0, j0), {nw, nh}, stride_);
  for (std::int64_t i = 0; i < nw; ++i)
    for (std::int64_t j = 0; j < nh; ++j) out.sample(i, j) = sample(i0 + i, j0 + j);
  return out;
}

namespace {

void require_unit_stride(const LatticeField& f) {
  if (f.stride() != 1) throw DomainError("operation requires a unit-stride field");
}

struct Tap {
  Point offset;
  double weight;
};

// out(v) = diag * f(v) - sum_taps weight * f(v + offset), output grown by reach.
LatticeField apply_stencil(const LatticeField& f, double diag, const std::vector<Tap>& taps,
                           std::int64_t reach, unsigned threads) {
  require_unit_stride(f);
  const Point o = f.origin();
  LatticeField out({o.x - reach, o.y - reach}, {f.width() + 2 * reach, f.height() + 2 * reach});
  const std::int64_t h = out.height();
  parallel_for(static_cast<std::size_t>(out.width()), threads, [&](std::size_t begin, std::size_t end) {
    for (auto i = static_cast<std::int64_t>(begin); i < static_cast<std::int64_t>(end); ++i) {
      for (std::int64_t j = 0; j < h; ++j) {
        const Point v = out.site(i, j);
        double acc = diag * f.at(v);
        for (const Tap& tap : taps) acc -= tap.weight * f.at({v.x + tap.offset.x, v.y + tap.offset.y});
        out.sample(i, j) = acc;
      }
    }
  });
  return out;
}

void check_mellin_args(double s, std::int64_t n_terms) {
  if (!(s > 2.0)) throw DomainError("Mellin exponent must exceed 2");
  if (n_terms < 1) throw DomainError("truncation order must be >= 1");
}

}  // namespace

double inner_product(const LatticeField& f, const LatticeField& g) {
  require_unit_stride(f);
  require_unit_stride(g);
  double sum = 0.0;
  for (std::int64_t i = 0; i < f.width(); ++i)
    for (std::int64_t j = 0; j < f.height(); ++j) sum += f.sample(i, j) * g.at(f.site(i, j));
  return sum;
}

double sup_distance(const LatticeField& f, const LatticeField& g) {
  double worst = 0.0;
  for (std::int64_t i = 0; i < f.width(); ++i)
    for (std::int64_t j = 0; j < f.height(); ++j)
      worst = std::max(worst, std::abs(f.sample(i, j) - g.at(f.site(i, j))));
  for (std::int64_t i = 0; i < g.width(); ++i)
    for (std::int64_t j = 0; j < g.height(); ++j)
      if (!f.has_sample(g.site(i, j))) worst = std::max(worst, std::abs(g.sample(i, j)));
  return worst;
}

LatticeField apply_path_laplacian(const LatticeField& f, std::int64_t k, unsigned threads) {
  std::vector<Tap> taps;
  for (const Point& p : manhattan_ring(k).offsets) taps.push_back({p, 1.0});
  return apply_stencil(f, 4.0 * static_cast<double>(k), taps, k, threads);
}

LatticeField apply_mellin_truncated(const LatticeField& f, double s, std::int64_t n_terms, unsigned threads) {
  check_mellin_args(s, n_terms);
  std::vector<Tap> taps;
  double diag = 0.0;
  for (std::int64_t k = 1; k <= n_terms; ++k) {
    const double w = std::pow(static_cast<double>(k), -s);
    diag += 4.0 * static_cast<double>(k) * w;
    for (const Point& p : manhattan_ring(k).offsets) taps.push_back({p, w});
  }
  return apply_stencil(f, diag, taps, n_terms, threads);
}

SparseOperator::SparseOperator(Window window, std::vector<std::size_t> row_start,
                               std::vector<std::uint32_t> columns, std::vector<double> entries)
    : window_(window), row_start_(std::move(row_start)), columns_(std::move(columns)), entries_(std::move(entries)) {}

std::span<const std::uint32_t> SparseOperator::row_columns(std::size_t row) const {
  return std::span(columns_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
}

std::span<const double> SparseOperator::row_entries(std::size_t row) const {
  return std::span(entries_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
}

double SparseOperator::entry(std::size_t row, std::size_t col) const {
  const auto cols = row_columns(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(col));
  if (it == cols.end() || *it != col) return 0.0;
  return row_entries(row)[static_cast<std::size_t>(it - cols.begin())];
}

double SparseOperator::row_sum(std::size_t row) const {
  double sum = 0.0;
  for (double e : row_entries(row)) sum += e;
  return sum;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> out, unsigned threads) const {
  if (x.size() != rows() || out.size() != rows()) throw DomainError("vector size does not match operator");
  parallel_for(rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double acc = 0.0;
      for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) acc += entries_[e] * x[columns_[e]];
      out[r] = acc;
    }
  });
}

SparseOperator compress_operator(const Window& window, double s, std::int64_t n_terms) {
  check_mellin_args(s, n_terms);
  const std::int64_t w = window.extent.width;
  const std::int64_t h = window.extent.height;
  if (w < 2 * n_terms + 1 || h < 2 * n_terms + 1)
    throw WindowTooSmallError("window must be at least 2N+1 sites wide and high");
  if (static_cast<std::uint64_t>(w * h) > std::numeric_limits<std::uint32_t>::max())
    throw DomainError("window too large for compressed storage");

  std::vector<double> weight(static_cast<std::size_t>(n_terms + 1), 0.0);
  double diag = 0.0;
  for (std::int64_t k = 1; k <= n_terms; ++k) {
    weight[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(k), -s);
    diag += 4.0 * static_cast<double>(k) * weight[static_cast<std::size_t>(k)];
  }

  std::vector<std::size_t> row_start{0};
  std::vector<std::uint32_t> columns;
  std::vector<double> entries;
  for (std::int64_t i = 0; i < w; ++i) {
    for (std::int64_t j = 0; j < h; ++j) {
      // x-major column order keeps each row sorted
      for (std::int64_t di = std::max(-n_terms, -i); di <= std::min(n_terms, w - 1 - i); ++di) {
        const std::int64_t rem = n_terms - std::abs(di);
        for (std::int64_t dj = std::max(-rem, -j); dj <= std::min(rem, h - 1 - j); ++dj) {
          const std::int64_t d = std::abs(di) + std::abs(dj);
          columns.push_back(static_cast<std::uint32_t>((i + di) * h + (j + dj)));
          entries.push_back(d == 0 ? diag : -weight[static_cast<std::size_t>(d)]);
        }
      }
      row_start.push_back(columns.size());
    }
  }
  return SparseOperator(window, std::move(row_start), std::move(columns), std::move(entries));
}

}  // namespace superlattice::lattice
