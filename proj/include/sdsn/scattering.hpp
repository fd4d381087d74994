// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "sdsn/risk.hpp"
#include "sdsn/transform.hpp"
#include "sdsn/wavelet_frames.hpp"

namespace sdsn {

// Dense row-major 3-tensor, index (i, j, t).
struct Tensor3 {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(int a, int b, int c) : d0(a), d1(b), d2(c), data(static_cast<size_t>(a) * b * c, 0.0) {}

  double& operator()(int i, int j, int t) { return data[(static_cast<size_t>(i) * d1 + j) * d2 + t]; }
  double operator()(int i, int j, int t) const { return data[(static_cast<size_t>(i) * d1 + j) * d2 + t]; }
  size_t size() const { return data.size(); }
};

enum class Pooling {
  Mean,      // S1 and S2 averaged over time
  KeepTime,  // decimated time axis kept
};

struct LayerSpec {
  int J = 0;
  int Q = 0;
  WaveletSpec wavelet;
  // Low-pass decimation; 2^J when unset. Reduced to gcd(N, decimation)
  // when it does not divide the signal length.
  std::optional<int> decimation;
};

struct ScatteringConfig {
  LayerSpec layer1{5, 8, {}, std::nullopt};
  LayerSpec layer2{4, 1, {}, std::nullopt};
  int window = 1 << 16;  // samples per noise-estimation window
  bool sparse = true;
  NoiseConfig noise;
  Pooling pooling = Pooling::Mean;
};

struct Layer1Output {
  RMatrix U1;   // K1 x N
  RMatrix U1T;  // U1 with the mask applied
  ThresholdMask mask1;
  RMatrix S1;   // K1 x T1
  std::vector<double> window_sigma;
  int decimation = 1;
};

struct Layer2Output {
  Tensor3 U2;   // K2 x K1 x N
  Tensor3 U2T;
  std::vector<ThresholdMask> mask2;  // one K2 x N mask per layer-1 row
  Tensor3 S2;   // K2 x K1 x T2
  int decimation = 1;
};

struct ScatteringOutput {
  Layer1Output layer1;
  Layer2Output layer2;
  // S1 flattened row-major, then S2 in its (j2, j1, t) storage order;
  // with Mean pooling T1 = T2 = 1.
  RVector features;
};

// Owns both filter banks and their local frames so that repeated passes
// reuse them.
class ScatteringNetwork {
 public:
  explicit ScatteringNetwork(ScatteringConfig cfg);

  const ScatteringConfig& config() const { return cfg_; }
  const FilterBank& bank1() const { return bank1_; }
  const FilterBank& bank2() const { return bank2_; }
  const LocalFrame& frame1() const { return frame1_; }
  const LocalFrame& frame2() const { return frame2_; }

  // Expects a unit-energy signal.
  Layer1Output layer1(const RVector& y) const;
  Layer2Output layer2(const RMatrix& U1T) const;
  // Normalizes y to unit energy, then runs both layers.
  ScatteringOutput forward(const Signal& y) const;

  int feature_length(int n) const;

 private:
  ScatteringConfig cfg_;
  FilterBank bank1_;
  FilterBank bank2_;
  LocalFrame frame1_;
  LocalFrame frame2_;
};

Layer1Output sdsn_layer1(const Signal& y, const ScatteringConfig& cfg);
Layer2Output sdsn_layer2(const RMatrix& U1T, const ScatteringConfig& cfg);
RVector forward(const Signal& y, const ScatteringConfig& cfg);

}  // namespace sdsn
