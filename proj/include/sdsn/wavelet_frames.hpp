// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "sdsn/types.hpp"

namespace sdsn {

// Geometric dilation set lambda_j = 2^(j/Q), j = 0 .. J*Q-1.
struct ScaleSet {
  int J = 0;
  int Q = 0;
  std::vector<double> lambdas;

  int size() const { return static_cast<int>(lambdas.size()); }
};

ScaleSet make_scales(int J, int Q);

// Morlet mother wavelet. omega0 is the center angular frequency in mother
// time units; dt is the sampling step expressed in those units, so the
// finest filter of a bank is centered at omega0 * dt radians/sample.
struct MorletParams {
  double omega0 = 6.0;
  double dt = 1.0 / 3.0;
};

Complex morlet_time(double t, const MorletParams& p);
// Zero for omega <= 0 (analytic wavelet).
double morlet_freq(double omega, const MorletParams& p);

// Gammatone wavelet with center xi and damping sigma, both in
// radians/sample at unit dilation.
struct GammatoneParams {
  int m = 4;
  double r = 0.5;
  double xi = 0.0;
  double bandwidth = 0.0;
  double sigma = 0.0;
};

double gammatone_sigma(int m, double r, double xi, double bandwidth);
GammatoneParams gammatone_params(int m, double r, double xi, double bandwidth);
// xi = 2 pi / (1 + 2^(1/Q)), B = (1 - 2^(-1/Q)) xi.
GammatoneParams gammatone_quasi_orthogonal(int m, int Q, double r = 0.5);

// d/dt [t^(m-1) exp((i xi - sigma) t)] for t >= 0, zero for t < 0. With
// xi = 2 pi and sigma = 2 pi s this is the classical closed form
// (2 pi (i - s) t^(m-1) + (m-1) t^(m-2)) e^(-2 pi s t) e^(2 pi i t).
Complex gammatone_time(double t, const GammatoneParams& p);
// Fourier transform of gammatone_time: i w (m-1)! / (sigma + i (w - xi))^m.
Complex gammatone_freq(double omega, const GammatoneParams& p);

enum class Family { Morlet, Gammatone };

enum class Normalization {
  Energy,     // psi_lambda(t) = lambda^(-1/2) psi(t / lambda)
  Amplitude,  // psi_lambda(t) = lambda^(-1) psi(t / lambda)
};

struct WaveletSpec {
  Family family = Family::Gammatone;
  MorletParams morlet;
  int gammatone_order = 4;
  double gammatone_r = 0.5;
  // Overrides the quasi-orthogonal Gammatone defaults when set.
  std::optional<GammatoneParams> gammatone;
  Normalization normalization = Normalization::Energy;
};

const char* family_name(Family f);
const char* normalization_name(Normalization n);

// Filters are stored centered: column length()/2 holds t = 0. Rows are
// ordered by ascending dilation, i.e. descending center frequency.
struct FilterBank {
  ScaleSet scales;
  WaveletSpec wavelet;
  GammatoneParams gammatone;  // resolved parameters, Gammatone only
  int n_fft = 0;
  double normalization_constant = 1.0;

  CMatrix filters_freq;  // K x n_fft, closed form on the DFT grid
  CMatrix filters_time;  // K x length()
  std::vector<int> supports;
  RVector center_frequencies;  // radians/sample

  double lowpass_std = 0.0;   // samples
  RVector lowpass_time;       // odd length, centered
  RVector lowpass_freq;       // n_fft

  int size() const { return static_cast<int>(filters_time.rows()); }
  int length() const { return static_cast<int>(filters_time.cols()); }
  int max_support() const;

  // Closed-form frequency response of row j at angular frequency omega
  // (radians/sample), including the bank's normalization constant.
  Complex response(int j, double omega) const;
};

// Envelope cut-off used to truncate filters.
inline constexpr double kSupportTolerance = 1e-5;

// Smallest power of two satisfying the n_fft >= 2 * max support
// precondition of build_filterbank.
int minimum_fft_size(const ScaleSet& scales, const WaveletSpec& spec);

FilterBank build_filterbank(const ScaleSet& scales, const WaveletSpec& spec, int n_fft);

// Explicit analysis matrix for one time position. Rows of W are the
// conjugated filters, so a scalogram column equals W times the signal
// segment centered on it.
struct LocalFrame {
  CMatrix W;              // K x L
  CMatrix Wd;             // L x K, Moore-Penrose pseudoinverse
  CMatrix gram_dual;      // <psi_dagger_i, psi_dagger_j> = (Wd^H Wd)_ij
  CMatrix gram_analysis;  // <psi_i, psi_j> = (W W^H)_ij
  RVector l1_norms;
  RMatrix abs_gram_dual;

  int rank = 0;
  bool truncated = false;  // singular values were discarded by the cutoff
  double cutoff = 0.0;

  // Root-mean-square row norms, used to express coefficient-domain noise
  // levels in signal units.
  double row_norm_rms = 0.0;
  double real_row_norm_rms = 0.0;

  int size() const { return static_cast<int>(W.rows()); }
  int length() const { return static_cast<int>(W.cols()); }
};

// Pseudoinverse by SVD, discarding singular values below
// rcond * s_max. The default rcond is max(K, L) * machine epsilon.
LocalFrame make_local_frame(const CMatrix& W, std::optional<double> rcond = std::nullopt);

// Central L samples of every filter of the bank.
LocalFrame local_frame(const FilterBank& bank, int L);
LocalFrame local_frame(const FilterBank& bank);

}  // namespace sdsn
