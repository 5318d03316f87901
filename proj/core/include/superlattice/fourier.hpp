#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace superlattice::fourier {

// In-place unnormalised 2D DFT on an owned n x n buffer (row-major).
// forward: X_k = sum_m x_m e^{-2 pi i k.m / n}; backward uses e^{+...}.
class Fft2D {
 public:
  explicit Fft2D(std::int64_t n);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  [[nodiscard]] std::int64_t size() const noexcept { return n_; }
  [[nodiscard]] std::span<std::complex<double>> data() noexcept;

  void forward();
  void backward();

 private:
  std::int64_t n_;
  void* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace superlattice::fourier
