// SPDX-License-Identifier: Apache-2.0
#include "sdsn/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdsn/fft.hpp"

namespace sdsn {

Signal normalize_energy(Signal s) {
  double energy = 0.0;
  for (double v : s.samples) {
    if (!std::isfinite(v)) throw NumericalError("normalize_energy: non-finite sample");
    energy += v * v;
  }
  if (energy > 0.0) {
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : s.samples) v *= scale;
  }
  return s;
}

CwtPlan::CwtPlan(const FilterBank& bank, int n) : bank_(&bank), n_(n) {
  if (n < bank.max_support()) {
    throw LengthError("cwt: signal length " + std::to_string(n) + " is shorter than the filter support " +
                      std::to_string(bank.max_support()));
  }
  padded_ = fast_fft_size(n + bank.length());
  Fft fft(padded_);
  conj_spectra_.reserve(static_cast<size_t>(bank.size()));
  for (int j = 0; j < bank.size(); ++j) {
    CVector h = CVector::Zero(padded_);
    h.head(bank.length()) = bank.filters_time.row(j).transpose();
    conj_spectra_.push_back(fft.forward(h).conjugate());
  }
}

Scalogram CwtPlan::operator()(const RVector& y) const {
  if (y.size() != n_) throw DimensionMismatch("cwt: signal length does not match plan");
  Fft fft(padded_);
  CVector padded = CVector::Zero(padded_);
  padded.head(n_) = y.cast<Complex>();
  const CVector Y = fft.forward(padded);

  Scalogram out;
  out.scales = bank_->scales;
  out.coeffs.resize(bank_->size(), n_);
  // corr[d] = sum_i y[d + i] conj(h[i]); the filter sample i sits at time
  // i - length/2, so coefficient t lives at d = t - length/2.
  const int shift = bank_->length() / 2;
  for (int j = 0; j < bank_->size(); ++j) {
    const CVector corr = fft.inverse(Y.cwiseProduct(conj_spectra_[static_cast<size_t>(j)]));
    for (int t = 0; t < n_; ++t) {
      out.coeffs(j, t) = corr[((t - shift) % padded_ + padded_) % padded_];
    }
  }
  return out;
}

Scalogram cwt(const RVector& y, const FilterBank& bank) {
  const CwtPlan plan(bank, static_cast<int>(y.size()));
  return plan(y);
}

Scalogram cwt(const Signal& y, const FilterBank& bank) {
  return cwt(Eigen::Map<const RVector>(y.samples.data(), y.size()), bank);
}

RMatrix modulus(const CMatrix& s) { return s.cwiseAbs(); }

RMatrix modulus(const Scalogram& s) { return modulus(s.coeffs); }

RMatrix lowpass_average(const RMatrix& u, const FilterBank& bank, int decimation) {
  const int n = static_cast<int>(u.cols());
  if (decimation < 1) throw InvalidParameter("lowpass_average: decimation must be >= 1");
  if (n % decimation != 0) {
    throw InvalidParameter("lowpass_average: decimation " + std::to_string(decimation) +
                           " does not divide length " + std::to_string(n));
  }
  const int out_cols = n / decimation;
  RMatrix out(u.rows(), out_cols);
  if (n == 0) return out;

  // Low-pass wrapped onto the row length; circular convolution keeps the
  // row mean exactly because the taps sum to one.
  const int half = static_cast<int>(bank.lowpass_time.size()) / 2;
  CVector taps = CVector::Zero(n);
  for (int t = -half; t <= half; ++t) taps[((t % n) + n) % n] += bank.lowpass_time[t + half];
  Fft fft(n);
  const CVector phi = fft.forward(taps);
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    const CVector row = u.row(r).transpose().cast<Complex>();
    const CVector smooth = fft.inverse(fft.forward(row).cwiseProduct(phi));
    for (int c = 0; c < out_cols; ++c) out(r, c) = smooth[c * decimation].real();
  }
  return out;
}

std::vector<IndexRange> partition_windows(int n, int window) {
  if (window < 1) throw InvalidParameter("partition_windows: window must be >= 1");
  if (n < 0) throw InvalidParameter("partition_windows: negative length");
  std::vector<IndexRange> ranges;
  for (int begin = 0; begin < n; begin += window) {
    ranges.push_back({begin, std::min(n, begin + window)});
  }
  return ranges;
}

}  // namespace sdsn
