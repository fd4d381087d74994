// SPDX-License-Identifier: Apache-2.0
#include "sdsn/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace sdsn {

namespace {

// FFTW planning is not thread-safe; execution with new-array execute is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct AlignedBuffer {
  explicit AlignedBuffer(int n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)))) {
    if (!data) throw NumericalError("fftw_malloc failed");
  }
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Fft::Fft(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 1) throw InvalidParameter("FFT length must be positive");
  AlignedBuffer in(n), out(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->forward = fftw_plan_dft_1d(n, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_1d(n, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->inverse) throw NumericalError("FFTW planning failed");
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

namespace {

CVector run(fftw_plan plan, const CVector& x, int n, double scale) {
  if (x.size() != n) throw DimensionMismatch("FFT input length does not match plan");
  AlignedBuffer in(n), out(n);
  for (int i = 0; i < n; ++i) {
    in.data[i][0] = x[i].real();
    in.data[i][1] = x[i].imag();
  }
  fftw_execute_dft(plan, in.data, out.data);
  CVector y(n);
  for (int i = 0; i < n; ++i) y[i] = Complex(out.data[i][0], out.data[i][1]) * scale;
  return y;
}

}  // namespace

CVector Fft::forward(const CVector& x) const { return run(plans_->forward, x, n_, 1.0); }

CVector Fft::inverse(const CVector& x) const {
  return run(plans_->inverse, x, n_, 1.0 / static_cast<double>(n_));
}

int fast_fft_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

double bin_frequency(int k, int n) {
  const int shifted = (k < (n + 1) / 2) ? k : k - n;
  return 2.0 * kPi * static_cast<double>(shifted) / static_cast<double>(n);
}

}  // namespace sdsn
