// SPDX-License-Identifier: Apache-2.0
#include "sdsn/scattering.hpp"

#include <numeric>
#include <string>

namespace sdsn {

namespace {

FilterBank make_bank(const LayerSpec& layer) {
  const ScaleSet scales = make_scales(layer.J, layer.Q);
  return build_filterbank(scales, layer.wavelet, minimum_fft_size(scales, layer.wavelet));
}

int effective_decimation(const LayerSpec& layer, int n) {
  const int d = layer.decimation.value_or(1 << layer.J);
  if (d < 1) throw InvalidParameter("scattering: decimation must be >= 1");
  return n > 0 ? std::gcd(n, d) : 1;
}

ThresholdMask all_selected(int rows, int cols) { return ThresholdMask{BinaryMatrix::Ones(rows, cols)}; }

RVector time_mean(const RMatrix& s) {
  return s.cols() > 0 ? RVector(s.rowwise().mean()) : RVector::Zero(s.rows());
}

}  // namespace

ScatteringNetwork::ScatteringNetwork(ScatteringConfig cfg)
    : cfg_(std::move(cfg)),
      bank1_(make_bank(cfg_.layer1)),
      bank2_(make_bank(cfg_.layer2)),
      frame1_(local_frame(bank1_)),
      frame2_(local_frame(bank2_)) {
  if (cfg_.window < 2) throw InvalidParameter("scattering: window must be >= 2");
}

Layer1Output ScatteringNetwork::layer1(const RVector& y) const {
  const int n = static_cast<int>(y.size());
  const Scalogram s = cwt(y, bank1_);
  Layer1Output out;
  out.U1 = modulus(s);
  if (cfg_.sparse) {
    // Mask from the complex coefficients, applied to their moduli.
    MaskResult m = threshold_mask(s, frame1_, cfg_.window, cfg_.noise);
    out.window_sigma = m.risk.window_sigma;
    out.mask1 = std::move(m.mask);
    out.U1T = apply_mask(out.U1, out.mask1);
  } else {
    out.mask1 = all_selected(s.rows(), n);
    out.U1T = out.U1;
  }
  out.decimation = effective_decimation(cfg_.layer1, n);
  out.S1 = lowpass_average(out.U1T, bank1_, out.decimation);
  return out;
}

Layer2Output ScatteringNetwork::layer2(const RMatrix& U1T) const {
  const int k1 = static_cast<int>(U1T.rows());
  const int n = static_cast<int>(U1T.cols());
  const int k2 = bank2_.size();
  Layer2Output out;
  out.decimation = effective_decimation(cfg_.layer2, n);
  const int t2 = n / out.decimation;
  out.U2 = Tensor3(k2, k1, n);
  out.U2T = Tensor3(k2, k1, n);
  out.S2 = Tensor3(k2, k1, t2);
  out.mask2.reserve(static_cast<size_t>(k1));

  const CwtPlan plan(bank2_, n);
  for (int j1 = 0; j1 < k1; ++j1) {
    const Scalogram s = plan(U1T.row(j1).transpose());
    const RMatrix u = modulus(s);
    ThresholdMask mask = cfg_.sparse ? threshold_mask(s, frame2_, cfg_.window, cfg_.noise).mask
                                     : all_selected(k2, n);
    const RMatrix ut = cfg_.sparse ? apply_mask(u, mask) : u;
    const RMatrix pooled = lowpass_average(ut, bank2_, out.decimation);
    for (int j2 = 0; j2 < k2; ++j2) {
      for (int t = 0; t < n; ++t) {
        out.U2(j2, j1, t) = u(j2, t);
        out.U2T(j2, j1, t) = ut(j2, t);
      }
      for (int t = 0; t < t2; ++t) out.S2(j2, j1, t) = pooled(j2, t);
    }
    out.mask2.push_back(std::move(mask));
  }
  return out;
}

ScatteringOutput ScatteringNetwork::forward(const Signal& y) const {
  const Signal unit = normalize_energy(y);
  const RVector samples = Eigen::Map<const RVector>(unit.samples.data(), unit.size());
  ScatteringOutput out;
  out.layer1 = layer1(samples);
  out.layer2 = layer2(out.layer1.U1T);

  const Layer1Output& l1 = out.layer1;
  const Tensor3& s2 = out.layer2.S2;
  if (cfg_.pooling == Pooling::Mean) {
    const RVector m1 = time_mean(l1.S1);
    out.features.resize(m1.size() + static_cast<Eigen::Index>(s2.d0) * s2.d1);
    out.features.head(m1.size()) = m1;
    Eigen::Index pos = m1.size();
    for (int j2 = 0; j2 < s2.d0; ++j2) {
      for (int j1 = 0; j1 < s2.d1; ++j1) {
        double acc = 0.0;
        for (int t = 0; t < s2.d2; ++t) acc += s2(j2, j1, t);
        out.features[pos++] = s2.d2 > 0 ? acc / s2.d2 : 0.0;
      }
    }
  } else {
    out.features.resize(l1.S1.size() + static_cast<Eigen::Index>(s2.size()));
    Eigen::Index pos = 0;
    for (Eigen::Index r = 0; r < l1.S1.rows(); ++r) {
      for (Eigen::Index c = 0; c < l1.S1.cols(); ++c) out.features[pos++] = l1.S1(r, c);
    }
    for (double v : s2.data) out.features[pos++] = v;
  }
  return out;
}

int ScatteringNetwork::feature_length(int n) const {
  const int k1 = bank1_.size();
  const int k2 = bank2_.size();
  if (cfg_.pooling == Pooling::Mean) return k1 + k2 * k1;
  const int t1 = n / effective_decimation(cfg_.layer1, n);
  const int t2 = n / effective_decimation(cfg_.layer2, n);
  return k1 * t1 + k2 * k1 * t2;
}

Layer1Output sdsn_layer1(const Signal& y, const ScatteringConfig& cfg) {
  const ScatteringNetwork net(cfg);
  return net.layer1(Eigen::Map<const RVector>(y.samples.data(), y.size()));
}

Layer2Output sdsn_layer2(const RMatrix& U1T, const ScatteringConfig& cfg) {
  const ScatteringNetwork net(cfg);
  return net.layer2(U1T);
}

RVector forward(const Signal& y, const ScatteringConfig& cfg) {
  const ScatteringNetwork net(cfg);
  return net.forward(y).features;
}

}  // namespace sdsn
