#include "superlattice/fourier.hpp"

#include <fftw3.h>

#include <mutex>

#include "superlattice/errors.hpp"

namespace superlattice::fourier {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex planner_mutex;
}  // namespace

Fft2D::Fft2D(std::int64_t n) : n_(n) {
  if (n < 1 || n > (1 << 15)) throw DomainError("unsupported transform size");
  const auto count = static_cast<std::size_t>(n * n);
  buffer_ = fftw_malloc(sizeof(fftw_complex) * count);
  if (!buffer_) throw std::bad_alloc();
  auto* buf = static_cast<fftw_complex*>(buffer_);
  const int dim = static_cast<int>(n);
  std::lock_guard lock(planner_mutex);
  forward_plan_ = fftw_plan_dft_2d(dim, dim, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_2d(dim, dim, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) {
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_free(buffer_);
    throw Error("FFT planning failed");
  }
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

std::span<std::complex<double>> Fft2D::data() noexcept {
  return {reinterpret_cast<std::complex<double>*>(buffer_), static_cast<std::size_t>(n_ * n_)};
}

void Fft2D::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void Fft2D::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

}  // namespace superlattice::fourier
