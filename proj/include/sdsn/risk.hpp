// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "sdsn/transform.hpp"
#include "sdsn/wavelet_frames.hpp"

namespace sdsn {

enum class Estimator {
  Mad,         // median(|x - median(x)|) / 0.6745
  StdLiteral,  // std(x) / 0.67
};

// Which real statistic of the complex coefficients feeds the estimator.
enum class NoiseComponent {
  Real,     // real parts
  Modulus,  // moduli, rescaled by the Rayleigh median sqrt(2 ln 2)
};

inline constexpr double kMadConstant = 0.6745;
inline constexpr double kLiteralConstant = 0.67;

struct NoiseEstimate {
  double sigma_hat = 0.0;
  Estimator estimator = Estimator::Mad;
  double constant = kMadConstant;
};

NoiseEstimate estimate_sigma(const CMatrix& window, Estimator est = Estimator::Mad,
                             NoiseComponent component = NoiseComponent::Real);

enum class RiskMode {
  Bound,       // b_k = sigma^2 sum_j |gd_kj ga_kj|
  Pseudocode,  // b_k = sigma sum_j |gd_kj|^2, compatibility form
};

const char* risk_mode_name(RiskMode m);

struct NoiseConfig {
  Estimator estimator = Estimator::Mad;
  NoiseComponent component = NoiseComponent::Real;
  // Divide coefficient-domain estimates by the frame's RMS row norm so
  // that sigma is expressed in signal units, as the risk terms require.
  bool signal_units = true;
  // Bypasses estimation (oracle runs and noiseless references).
  std::optional<double> fixed_sigma;
  RiskMode mode = RiskMode::Bound;
};

// a_k = |mu_k| sum_j |mu_j| |gd_kj|.
RVector risk_unselected(const CVector& mu, const LocalFrame& frame);

// Per-unit selected risk: sum_j |gd_kj ga_kj| (Bound) or sum_j |gd_kj|^2
// (Pseudocode).
RVector selected_risk_unit(const LocalFrame& frame, RiskMode mode = RiskMode::Bound);

// b_k = sigma^2 * unit_k (Bound) or sigma * unit_k (Pseudocode).
RVector risk_selected(const LocalFrame& frame, double sigma, RiskMode mode = RiskMode::Bound);

struct ThresholdMask {
  BinaryMatrix delta;  // 1 = selected

  int rows() const { return static_cast<int>(delta.rows()); }
  int cols() const { return static_cast<int>(delta.cols()); }
};

struct RiskBreakdown {
  RMatrix a;                      // K x n
  RVector b_unit;                 // K
  RiskMode mode = RiskMode::Bound;
  std::vector<IndexRange> windows;
  std::vector<double> window_sigma;
  double chosen_risk = 0.0;       // sum_k,t min(a, b)

  double b(int k, int t) const;
  double sigma_at(int t) const;
};

struct MaskResult {
  ThresholdMask mask;
  RiskBreakdown risk;
};

// Keeps a coefficient when its selected risk is strictly below its
// unselected risk. Sigma is estimated per window unless fixed.
MaskResult threshold_mask(const Scalogram& scalogram, const LocalFrame& frame, int window,
                          const NoiseConfig& noise = {});
MaskResult threshold_mask(const CMatrix& coeffs, const LocalFrame& frame, int window,
                          const NoiseConfig& noise = {});

Scalogram apply_mask(const Scalogram& s, const ThresholdMask& mask);
CMatrix apply_mask(const CMatrix& s, const ThresholdMask& mask);
RMatrix apply_mask(const RMatrix& s, const ThresholdMask& mask);

// Sum of b where delta = 1 and a where delta = 0.
double risk_under_mask(const RVector& a, const RVector& b, const BinaryVector& delta);

// sum_k min(a_k(mu(x)), b_k(sigma)).
double upper_bound_risk(const CVector& x_coeffs, const LocalFrame& frame, double sigma);

// Same expression with the observed coefficients.
double empirical_risk(const CVector& y_coeffs, const LocalFrame& frame, double sigma);

// Exact expected reconstruction error of a fixed mask,
// ||Wd D_U mu||^2 + sigma^2 ||Wd D_S W||_F^2.
double ideal_risk_given_mask(const CVector& x_coeffs, const LocalFrame& frame, double sigma,
                             const BinaryVector& delta);

BinaryVector donoho_orthogonal_mask(const CVector& x_coeffs, double sigma);

template <typename Derived>
double sparsity_ratio(const Eigen::MatrixBase<Derived>& m, double zero_tol = 0.0) {
  const Eigen::Index total = m.size();
  if (total == 0) return 1.0;
  Eigen::Index nonzero = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > zero_tol) ++nonzero;
    }
  }
  return 1.0 - static_cast<double>(nonzero) / static_cast<double>(total);
}

// Upper bound on the all-unselected empirical risk:
// R_up(x) + sum_kj C_kj |gd_kj|, with
// C_kj = (|mu_k| ||psi_j||_1 + |mu_j| ||psi_k||_1) sigma sqrt(2/pi) + sigma^2 (1 - 2/pi).
double unselected_risk_bound(const CVector& x_coeffs, const LocalFrame& frame, double sigma);

}  // namespace sdsn
