// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sdsn/types.hpp"

namespace sdsn::testing {

// O(n^2) DFT used as an oracle independent of FFTW.
inline CVector naive_dft(const CVector& x) {
  const Eigen::Index n = x.size();
  CVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double ph = -2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * Complex(std::cos(ph), std::sin(ph));
    }
    out[k] = acc;
  }
  return out;
}

// Rows (1,0), (0,1), (1/sqrt2, 1/sqrt2).
inline CMatrix tight_frame_3x2() {
  CMatrix W(3, 2);
  const double h = 1.0 / std::sqrt(2.0);
  W << 1.0, 0.0, 0.0, 1.0, h, h;
  return W;
}

// Linear chirp sweeping f0 -> f1 (cycles/sample) over n samples.
inline RVector linear_chirp(int n, double f0, double f1) {
  RVector x(n);
  for (int t = 0; t < n; ++t) {
    const double u = static_cast<double>(t) / n;
    x[t] = std::sin(2.0 * kPi * n * (f0 * u + 0.5 * (f1 - f0) * u * u));
  }
  return x;
}

inline RVector tone(int n, double omega, double phase = 0.0) {
  RVector x(n);
  for (int t = 0; t < n; ++t) x[t] = std::sin(omega * t + phase);
  return x;
}

}  // namespace sdsn::testing
