// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sdsn/wavelet_frames.hpp"

namespace sdsn {

struct Signal {
  std::vector<double> samples;
  double sample_rate = 1.0;  // Hz, metadata only

  int size() const { return static_cast<int>(samples.size()); }
};

// Rescales to unit l2 norm; an all-zero signal is returned unchanged.
// Throws NumericalError on non-finite samples.
Signal normalize_energy(Signal s);

struct Scalogram {
  CMatrix coeffs;  // scales x time
  ScaleSet scales;

  int rows() const { return static_cast<int>(coeffs.rows()); }
  int cols() const { return static_cast<int>(coeffs.cols()); }
};

// Filter spectra for a fixed signal length. Padding is n + bank.length()
// so that the circular correlation equals the zero-padded linear one.
class CwtPlan {
 public:
  CwtPlan(const FilterBank& bank, int n);

  int signal_length() const { return n_; }
  int padded_length() const { return padded_; }
  const FilterBank& bank() const { return *bank_; }

  Scalogram operator()(const RVector& y) const;

 private:
  const FilterBank* bank_;
  int n_;
  int padded_;
  std::vector<CVector> conj_spectra_;
};

// Row j holds <y, psi_j( . - t)>, t = 0 .. n-1.
Scalogram cwt(const Signal& y, const FilterBank& bank);
Scalogram cwt(const RVector& y, const FilterBank& bank);

RMatrix modulus(const CMatrix& s);
RMatrix modulus(const Scalogram& s);

// Circular convolution of every row with the bank's low-pass, followed by
// keeping every decimation-th sample.
RMatrix lowpass_average(const RMatrix& u, const FilterBank& bank, int decimation = 1);

struct IndexRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

std::vector<IndexRange> partition_windows(int n, int window);

}  // namespace sdsn
