// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "sdsn/types.hpp"

namespace sdsn {

// Complex DFT of a fixed length backed by FFTW. Forward is unnormalized,
// inverse divides by n so that inverse(forward(x)) == x.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }
  CVector forward(const CVector& x) const;
  CVector inverse(const CVector& x) const;

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

// Smallest length >= n whose only prime factors are 2, 3 and 5.
int fast_fft_size(int n);

// Angular frequency (radians/sample) of DFT bin k on an n-point grid,
// mapped to [-pi, pi).
double bin_frequency(int k, int n);

}  // namespace sdsn
