// SPDX-License-Identifier: Apache-2.0
#include "sdsn/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdsn {

namespace {

double median_inplace(std::vector<double>& v) {
  const size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

const double kRayleighMedian = std::sqrt(2.0 * std::log(2.0));

void check_frame_rows(Eigen::Index rows, const LocalFrame& frame, const char* what) {
  if (rows != frame.size()) {
    throw DimensionMismatch(std::string(what) + ": coefficient count " + std::to_string(rows) +
                            " does not match frame size " + std::to_string(frame.size()));
  }
}

}  // namespace

const char* risk_mode_name(RiskMode m) { return m == RiskMode::Bound ? "bound" : "pseudocode"; }

NoiseEstimate estimate_sigma(const CMatrix& window, Estimator est, NoiseComponent component) {
  if (window.size() == 0) throw InvalidParameter("estimate_sigma: empty window");
  std::vector<double> values;
  values.reserve(static_cast<size_t>(window.size()));
  for (Eigen::Index c = 0; c < window.cols(); ++c) {
    for (Eigen::Index r = 0; r < window.rows(); ++r) {
      values.push_back(component == NoiseComponent::Real ? window(r, c).real() : std::abs(window(r, c)));
    }
  }

  NoiseEstimate out;
  out.estimator = est;
  if (est == Estimator::Mad) {
    out.constant = kMadConstant;
    if (component == NoiseComponent::Modulus) {
      out.sigma_hat = median_inplace(values) / kRayleighMedian;
      return out;
    }
    const double center = median_inplace(values);
    for (double& v : values) v = std::abs(v - center);
    out.sigma_hat = median_inplace(values) / kMadConstant;
    return out;
  }

  out.constant = kLiteralConstant;
  const double n = static_cast<double>(values.size());
  if (component == NoiseComponent::Modulus) {
    double power = 0.0;
    for (double v : values) power += v * v;
    out.sigma_hat = std::sqrt(power / (2.0 * n)) / kLiteralConstant;
    return out;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  out.sigma_hat = std::sqrt(var / n) / kLiteralConstant;
  return out;
}

RVector risk_unselected(const CVector& mu, const LocalFrame& frame) {
  check_frame_rows(mu.size(), frame, "risk_unselected");
  const RVector mag = mu.cwiseAbs();
  return mag.cwiseProduct(frame.abs_gram_dual * mag);
}

RVector selected_risk_unit(const LocalFrame& frame, RiskMode mode) {
  if (mode == RiskMode::Bound) {
    return frame.gram_dual.cwiseProduct(frame.gram_analysis).cwiseAbs().rowwise().sum();
  }
  return frame.abs_gram_dual.cwiseAbs2().rowwise().sum();
}

RVector risk_selected(const LocalFrame& frame, double sigma, RiskMode mode) {
  if (sigma < 0.0) throw InvalidParameter("risk_selected: sigma must be non-negative");
  const double scale = mode == RiskMode::Bound ? sigma * sigma : sigma;
  return scale * selected_risk_unit(frame, mode);
}

double RiskBreakdown::sigma_at(int t) const {
  for (size_t w = 0; w < windows.size(); ++w) {
    if (t >= windows[w].begin && t < windows[w].end) return window_sigma[w];
  }
  throw InvalidParameter("RiskBreakdown: column outside the thresholded range");
}

double RiskBreakdown::b(int k, int t) const {
  const double s = sigma_at(t);
  return (mode == RiskMode::Bound ? s * s : s) * b_unit[k];
}

MaskResult threshold_mask(const CMatrix& coeffs, const LocalFrame& frame, int window,
                          const NoiseConfig& noise) {
  check_frame_rows(coeffs.rows(), frame, "threshold_mask");
  if (window < 2) throw InvalidParameter("threshold_mask: window must be >= 2");
  if (noise.fixed_sigma && *noise.fixed_sigma < 0.0) {
    throw InvalidParameter("threshold_mask: fixed sigma must be non-negative");
  }

  const int K = static_cast<int>(coeffs.rows());
  const int n = static_cast<int>(coeffs.cols());
  MaskResult out;
  out.mask.delta = BinaryMatrix::Zero(K, n);
  RiskBreakdown& risk = out.risk;
  risk.mode = noise.mode;
  risk.a.resize(K, n);
  risk.b_unit = selected_risk_unit(frame, noise.mode);
  risk.windows = partition_windows(n, window);

  const double units = noise.component == NoiseComponent::Real ? frame.real_row_norm_rms
                                                                : frame.row_norm_rms / std::sqrt(2.0);

  for (const IndexRange& range : risk.windows) {
    const auto block = coeffs.middleCols(range.begin, range.size());
    double sigma = 0.0;
    if (noise.fixed_sigma) {
      sigma = *noise.fixed_sigma;
    } else {
      sigma = estimate_sigma(block, noise.estimator, noise.component).sigma_hat;
      if (noise.signal_units && units > 0.0) sigma /= units;
    }
    risk.window_sigma.push_back(sigma);

    const RVector b = (noise.mode == RiskMode::Bound ? sigma * sigma : sigma) * risk.b_unit;
    const RMatrix mag = block.cwiseAbs();
    const RMatrix a = mag.cwiseProduct(frame.abs_gram_dual * mag);
    risk.a.middleCols(range.begin, range.size()) = a;
    for (int c = 0; c < range.size(); ++c) {
      for (int k = 0; k < K; ++k) {
        const bool keep = b[k] < a(k, c);
        out.mask.delta(k, range.begin + c) = keep ? 1 : 0;
        risk.chosen_risk += std::min(a(k, c), b[k]);
      }
    }
  }
  return out;
}

MaskResult threshold_mask(const Scalogram& scalogram, const LocalFrame& frame, int window,
                          const NoiseConfig& noise) {
  return threshold_mask(scalogram.coeffs, frame, window, noise);
}

namespace {

template <typename M>
M masked(const M& s, const ThresholdMask& mask) {
  if (s.rows() != mask.delta.rows() || s.cols() != mask.delta.cols()) {
    throw DimensionMismatch("apply_mask: mask shape does not match coefficients");
  }
  M out = s;
  for (Eigen::Index c = 0; c < s.cols(); ++c) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      if (mask.delta(r, c) == 0) out(r, c) = typename M::Scalar(0);
    }
  }
  return out;
}

}  // namespace

CMatrix apply_mask(const CMatrix& s, const ThresholdMask& mask) { return masked(s, mask); }

RMatrix apply_mask(const RMatrix& s, const ThresholdMask& mask) { return masked(s, mask); }

Scalogram apply_mask(const Scalogram& s, const ThresholdMask& mask) {
  return Scalogram{masked(s.coeffs, mask), s.scales};
}

double risk_under_mask(const RVector& a, const RVector& b, const BinaryVector& delta) {
  if (a.size() != b.size() || a.size() != delta.size()) {
    throw DimensionMismatch("risk_under_mask: length mismatch");
  }
  double total = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) total += delta[k] ? b[k] : a[k];
  return total;
}

double upper_bound_risk(const CVector& x_coeffs, const LocalFrame& frame, double sigma) {
  const RVector a = risk_unselected(x_coeffs, frame);
  const RVector b = risk_selected(frame, sigma);
  return a.cwiseMin(b).sum();
}

double empirical_risk(const CVector& y_coeffs, const LocalFrame& frame, double sigma) {
  return upper_bound_risk(y_coeffs, frame, sigma);
}

double ideal_risk_given_mask(const CVector& x_coeffs, const LocalFrame& frame, double sigma,
                             const BinaryVector& delta) {
  check_frame_rows(x_coeffs.size(), frame, "ideal_risk_given_mask");
  if (delta.size() != x_coeffs.size()) throw DimensionMismatch("ideal_risk_given_mask: mask length");
  const Eigen::Index K = x_coeffs.size();
  Complex unselected(0.0, 0.0);
  Complex selected(0.0, 0.0);
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!delta[i] && !delta[j]) {
        unselected += std::conj(x_coeffs[i]) * x_coeffs[j] * frame.gram_dual(i, j);
      } else if (delta[i] && delta[j]) {
        selected += frame.gram_dual(i, j) * frame.gram_analysis(j, i);
      }
    }
  }
  return unselected.real() + sigma * sigma * selected.real();
}

BinaryVector donoho_orthogonal_mask(const CVector& x_coeffs, double sigma) {
  BinaryVector delta(x_coeffs.size());
  for (Eigen::Index i = 0; i < x_coeffs.size(); ++i) {
    delta[i] = std::norm(x_coeffs[i]) > sigma * sigma ? 1 : 0;
  }
  return delta;
}

double unselected_risk_bound(const CVector& x_coeffs, const LocalFrame& frame, double sigma) {
  check_frame_rows(x_coeffs.size(), frame, "unselected_risk_bound");
  const Eigen::Index K = x_coeffs.size();
  const double gauss_abs = sigma * std::sqrt(2.0 / kPi);
  const double cross = sigma * sigma * (1.0 - 2.0 / kPi);
  double extra = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index j = 0; j < K; ++j) {
      const double c = std::abs(x_coeffs[k]) * frame.l1_norms[j] * gauss_abs +
                       std::abs(x_coeffs[j]) * frame.l1_norms[k] * gauss_abs + cross;
      extra += c * frame.abs_gram_dual(k, j);
    }
  }
  return upper_bound_risk(x_coeffs, frame, sigma) + extra;
}

}  // namespace sdsn
