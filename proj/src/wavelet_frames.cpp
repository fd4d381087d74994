// SPDX-License-Identifier: Apache-2.0
#include "sdsn/wavelet_frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "sdsn/fft.hpp"

namespace sdsn {

ScaleSet make_scales(int J, int Q) {
  if (J <= 0 || Q <= 0) {
    throw InvalidParameter("make_scales: J and Q must be positive (got J=" + std::to_string(J) +
                           ", Q=" + std::to_string(Q) + ")");
  }
  ScaleSet s;
  s.J = J;
  s.Q = Q;
  s.lambdas.resize(static_cast<size_t>(J) * static_cast<size_t>(Q));
  for (size_t j = 0; j < s.lambdas.size(); ++j) {
    s.lambdas[j] = std::exp2(static_cast<double>(j) / static_cast<double>(Q));
  }
  return s;
}

namespace {
const double kPiQuarter = std::pow(kPi, -0.25);
}

Complex morlet_time(double t, const MorletParams& p) {
  return kPiQuarter * std::exp(Complex(0.0, p.omega0 * t)) * std::exp(-0.5 * t * t);
}

double morlet_freq(double omega, const MorletParams& p) {
  if (omega <= 0.0) return 0.0;
  const double d = omega - p.omega0;
  return kPiQuarter * std::exp(-0.5 * d * d);
}

double gammatone_sigma(int m, double r, double xi, double bandwidth) {
  if (m < 2) throw InvalidParameter("gammatone_sigma: order m must be >= 2");
  if (!(r > 0.0 && r < 1.0)) throw InvalidParameter("gammatone_sigma: r must lie in (0, 1)");
  if (!(xi > 0.0)) throw InvalidParameter("gammatone_sigma: xi must be positive");
  if (!(bandwidth > 0.0)) throw InvalidParameter("gammatone_sigma: bandwidth must be positive");
  const double md = static_cast<double>(m);
  const double r2m = std::pow(r, 2.0 / md);
  const double one_minus = 1.0 - r2m;
  const double mx2 = md * md * xi * xi;
  const double x = bandwidth * bandwidth / (one_minus * one_minus * mx2);
  // sqrt(1 + x) - 1 without cancellation for small x.
  const double root_minus_one = x / (std::sqrt(1.0 + x) + 1.0);
  const double sigma2 = r2m * one_minus * mx2 / 2.0 * root_minus_one;
  return std::sqrt(sigma2);
}

GammatoneParams gammatone_params(int m, double r, double xi, double bandwidth) {
  GammatoneParams p;
  p.m = m;
  p.r = r;
  p.xi = xi;
  p.bandwidth = bandwidth;
  p.sigma = gammatone_sigma(m, r, xi, bandwidth);
  return p;
}

GammatoneParams gammatone_quasi_orthogonal(int m, int Q, double r) {
  if (Q <= 0) throw InvalidParameter("gammatone_quasi_orthogonal: Q must be positive");
  const double q = static_cast<double>(Q);
  const double xi = 2.0 * kPi / (1.0 + std::exp2(1.0 / q));
  const double bandwidth = (1.0 - std::exp2(-1.0 / q)) * xi;
  return gammatone_params(m, r, xi, bandwidth);
}

Complex gammatone_time(double t, const GammatoneParams& p) {
  if (t < 0.0) return Complex(0.0, 0.0);
  const Complex z(-p.sigma, p.xi);
  const double m1 = static_cast<double>(p.m - 1);
  const double poly_hi = std::pow(t, m1);
  const double poly_lo = m1 * std::pow(t, m1 - 1.0);
  return (z * poly_hi + poly_lo) * std::exp(z * t);
}

Complex gammatone_freq(double omega, const GammatoneParams& p) {
  const double fact = std::tgamma(static_cast<double>(p.m));
  const Complex den = std::pow(Complex(p.sigma, omega - p.xi), p.m);
  return Complex(0.0, omega) * fact / den;
}

const char* family_name(Family f) {
  return f == Family::Morlet ? "morlet" : "gammatone";
}

const char* normalization_name(Normalization n) {
  return n == Normalization::Energy ? "energy" : "amplitude";
}

int FilterBank::max_support() const {
  return supports.empty() ? 0 : *std::max_element(supports.begin(), supports.end());
}

namespace {

double dilation_gain(double lambda, Normalization n) {
  // Fourier-side gain lambda^(1-p) for psi_lambda = lambda^-p psi(t/lambda).
  return n == Normalization::Energy ? std::sqrt(lambda) : 1.0;
}

double time_gain(double lambda, Normalization n) {
  return n == Normalization::Energy ? 1.0 / std::sqrt(lambda) : 1.0 / lambda;
}

GammatoneParams resolve_gammatone(const ScaleSet& scales, const WaveletSpec& spec) {
  if (spec.gammatone) return *spec.gammatone;
  return gammatone_quasi_orthogonal(spec.gammatone_order, scales.Q, spec.gammatone_r);
}

int morlet_half_width(double lambda, const MorletParams& p) {
  const double reach = std::sqrt(2.0 * std::log(1.0 / kSupportTolerance));
  return static_cast<int>(std::ceil(reach * lambda / p.dt));
}

// Number of causal samples whose envelope stays above the tolerance.
int gammatone_support(double lambda, const GammatoneParams& p) {
  const double peak_time = static_cast<double>(p.m - 1) / p.sigma;
  constexpr int kCap = 1 << 26;
  double peak = 0.0;
  int last = 0;
  for (int s = 0; s < kCap; ++s) {
    const double t = static_cast<double>(s) / lambda;
    const double env = std::abs(gammatone_time(t, p));
    peak = std::max(peak, env);
    if (env >= kSupportTolerance * peak) {
      last = s;
    } else if (t > peak_time) {
      return last + 1;
    }
  }
  throw SupportOverflow("Gammatone envelope does not decay within the scan limit");
}

std::vector<int> filter_supports(const ScaleSet& scales, const WaveletSpec& spec,
                                 const GammatoneParams& gp, std::vector<int>* half_widths) {
  std::vector<int> supports;
  for (double lambda : scales.lambdas) {
    int support = 0;
    int half = 0;
    if (spec.family == Family::Morlet) {
      half = morlet_half_width(lambda, spec.morlet);
      support = 2 * half;
    } else {
      support = gammatone_support(lambda, gp);
      half = support;
    }
    supports.push_back(support);
    if (half_widths) half_widths->push_back(half);
  }
  return supports;
}

int lowpass_half_width(double std_dev) {
  return static_cast<int>(std::ceil(std_dev * std::sqrt(2.0 * std::log(1.0 / kSupportTolerance))));
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void validate_spec(const WaveletSpec& spec) {
  if (spec.family == Family::Morlet) {
    if (!(spec.morlet.omega0 > 0.0)) throw InvalidParameter("Morlet omega0 must be positive");
    if (!(spec.morlet.dt > 0.0)) throw InvalidParameter("Morlet dt must be positive");
    if (spec.morlet.omega0 * spec.morlet.dt >= kPi) {
      throw InvalidParameter("Morlet finest center frequency omega0*dt must lie below Nyquist");
    }
  }
}

}  // namespace

Complex FilterBank::response(int j, double omega) const {
  const double lambda = scales.lambdas.at(static_cast<size_t>(j));
  const double gain = normalization_constant * dilation_gain(lambda, wavelet.normalization);
  if (wavelet.family == Family::Morlet) {
    return gain * morlet_freq(lambda * omega / wavelet.morlet.dt, wavelet.morlet);
  }
  return gain * gammatone_freq(lambda * omega, gammatone);
}

int minimum_fft_size(const ScaleSet& scales, const WaveletSpec& spec) {
  validate_spec(spec);
  const GammatoneParams gp = spec.family == Family::Gammatone ? resolve_gammatone(scales, spec)
                                                               : GammatoneParams{};
  const auto supports = filter_supports(scales, spec, gp, nullptr);
  const int max_support = *std::max_element(supports.begin(), supports.end());
  const int lp = 2 * lowpass_half_width(std::exp2(scales.J) / 2.0) + 1;
  return next_pow2(std::max(2 * max_support, lp));
}

FilterBank build_filterbank(const ScaleSet& scales, const WaveletSpec& spec, int n_fft) {
  if (scales.size() == 0) throw InvalidParameter("build_filterbank: empty scale set");
  validate_spec(spec);

  FilterBank bank;
  bank.scales = scales;
  bank.wavelet = spec;
  bank.n_fft = n_fft;
  if (spec.family == Family::Gammatone) bank.gammatone = resolve_gammatone(scales, spec);

  std::vector<int> half_widths;
  bank.supports = filter_supports(scales, spec, bank.gammatone, &half_widths);
  const int max_support = bank.max_support();
  if (n_fft < 2 * max_support) {
    throw SupportOverflow("build_filterbank: coarsest filter support " + std::to_string(max_support) +
                          " needs n_fft >= " + std::to_string(2 * max_support) + ", got " +
                          std::to_string(n_fft));
  }
  const int max_half = *std::max_element(half_widths.begin(), half_widths.end());
  const int length = 2 * max_half;
  const int center = length / 2;
  const int K = scales.size();

  bank.filters_time = CMatrix::Zero(K, length);
  bank.center_frequencies.resize(K);
  const Normalization norm = spec.normalization;
  Fft fft(n_fft);

  for (int j = 0; j < K; ++j) {
    const double lambda = scales.lambdas[static_cast<size_t>(j)];
    if (spec.family == Family::Morlet) {
      bank.center_frequencies[j] = spec.morlet.omega0 * spec.morlet.dt / lambda;
      CVector spectrum(n_fft);
      for (int k = 0; k < n_fft; ++k) {
        const double w = bin_frequency(k, n_fft);
        spectrum[k] = dilation_gain(lambda, norm) * morlet_freq(lambda * w / spec.morlet.dt, spec.morlet);
      }
      const CVector impulse = fft.inverse(spectrum);
      const int half = half_widths[static_cast<size_t>(j)];
      for (int t = -half; t < half; ++t) {
        bank.filters_time(j, center + t) = impulse[((t % n_fft) + n_fft) % n_fft];
      }
    } else {
      bank.center_frequencies[j] = bank.gammatone.xi / lambda;
      const int support = bank.supports[static_cast<size_t>(j)];
      for (int t = 0; t < support; ++t) {
        bank.filters_time(j, center + t) =
            time_gain(lambda, norm) * gammatone_time(static_cast<double>(t) / lambda, bank.gammatone);
      }
    }

    // Zero-mean correction: subtract the residual mean along a window
    // shaped like the envelope, which keeps support and causality.
    auto row = bank.filters_time.row(j);
    const Complex residual = row.sum();
    const double envelope_mass = row.cwiseAbs().sum();
    if (envelope_mass > 0.0) {
      const RVector envelope = row.cwiseAbs().transpose();
      for (int t = 0; t < length; ++t) row(t) -= residual * (envelope[t] / envelope_mass);
    }
  }

  const double finest_norm = bank.filters_time.row(0).norm();
  if (!(finest_norm > 0.0)) throw NumericalError("build_filterbank: degenerate finest filter");
  bank.normalization_constant = 1.0 / finest_norm;
  bank.filters_time *= bank.normalization_constant;

  bank.filters_freq.resize(K, n_fft);
  for (int j = 0; j < K; ++j) {
    for (int k = 0; k < n_fft; ++k) bank.filters_freq(j, k) = bank.response(j, bin_frequency(k, n_fft));
  }

  bank.lowpass_std = std::exp2(scales.J) / 2.0;
  const int lp_half = lowpass_half_width(bank.lowpass_std);
  if (2 * lp_half + 1 > n_fft) {
    throw SupportOverflow("build_filterbank: low-pass support exceeds n_fft");
  }
  bank.lowpass_time.resize(2 * lp_half + 1);
  for (int t = -lp_half; t <= lp_half; ++t) {
    const double u = static_cast<double>(t) / bank.lowpass_std;
    bank.lowpass_time[t + lp_half] = std::exp(-0.5 * u * u);
  }
  bank.lowpass_time /= bank.lowpass_time.sum();

  CVector placed = CVector::Zero(n_fft);
  for (int t = -lp_half; t <= lp_half; ++t) placed[((t % n_fft) + n_fft) % n_fft] = bank.lowpass_time[t + lp_half];
  bank.lowpass_freq = fft.forward(placed).real();
  return bank;
}

LocalFrame make_local_frame(const CMatrix& W, std::optional<double> rcond) {
  if (W.rows() == 0 || W.cols() == 0) throw InvalidParameter("make_local_frame: empty matrix");
  LocalFrame f;
  f.W = W;
  const Eigen::Index K = W.rows();
  const Eigen::Index L = W.cols();

  Eigen::BDCSVD<CMatrix> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  const double rel = rcond.value_or(static_cast<double>(std::max(K, L)) *
                                    std::numeric_limits<double>::epsilon());
  f.cutoff = rel * smax;
  RVector inv = RVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > f.cutoff && s[i] > 0.0) {
      inv[i] = 1.0 / s[i];
      ++f.rank;
    }
  }
  f.truncated = f.rank < std::min(K, L);
  f.Wd = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();

  f.gram_dual = f.Wd.adjoint() * f.Wd;
  f.gram_analysis = W * W.adjoint();
  // Hermitian by construction; symmetrize away rounding.
  f.gram_dual = (0.5 * (f.gram_dual + f.gram_dual.adjoint())).eval();
  f.gram_analysis = (0.5 * (f.gram_analysis + f.gram_analysis.adjoint())).eval();
  f.abs_gram_dual = f.gram_dual.cwiseAbs();

  f.l1_norms = W.cwiseAbs().rowwise().sum();
  f.row_norm_rms = std::sqrt(W.cwiseAbs2().rowwise().sum().mean());
  f.real_row_norm_rms = std::sqrt(W.real().cwiseAbs2().rowwise().sum().mean());
  return f;
}

LocalFrame local_frame(const FilterBank& bank, int L) {
  if (L < 1 || L > bank.length()) {
    throw InvalidParameter("local_frame: L must lie in [1, " + std::to_string(bank.length()) + "]");
  }
  const int start = bank.length() / 2 - L / 2;
  return make_local_frame(bank.filters_time.middleCols(start, L).conjugate());
}

LocalFrame local_frame(const FilterBank& bank) { return local_frame(bank, bank.length()); }

}  // namespace sdsn
