// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sdsn/risk.hpp"

namespace sdsn {

inline constexpr int kMaxEnumerationSize = 20;

struct EnumerationResult {
  BinaryVector best_delta;
  double best_risk = 0.0;
  // Indexed by the mask bit pattern (bit k set = coefficient k selected).
  std::optional<std::vector<double>> risks_all;
};

// Exhaustive minimization of ideal_risk_given_mask over all 2^K masks.
// Walks a Gray code so that each step is O(K); the winner is re-scored
// with ideal_risk_given_mask. Throws InvalidParameter for K > 20.
EnumerationResult brute_force_ideal_mask(const CVector& x_coeffs, const LocalFrame& frame, double sigma,
                                         bool keep_all = false);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Average of ||x - Wd (delta . W (x + eps))||^2 over eps ~ N(0, sigma^2 I).
McEstimate mc_realized_mse(const RVector& x, const LocalFrame& frame, double sigma, const BinaryVector& delta,
                           int draws, std::uint64_t seed);

struct MoorePenroseReport {
  // ||W Wd W - W||, ||Wd W Wd - Wd||, ||(W Wd)^H - W Wd||, ||(Wd W)^H - Wd W||,
  // each relative to the norm of the matrix it is compared with.
  std::array<double, 4> residuals{};
  double tolerance = 1e-8;
  bool pass = false;
};

MoorePenroseReport verify_moore_penrose(const CMatrix& W, const CMatrix& Wd, double tolerance = 1e-8);
MoorePenroseReport verify_moore_penrose(const LocalFrame& frame, double tolerance = 1e-8);

// Reproducible random instances. Every test stream gets its own id and
// every instance its own generator, so adding instances to one stream
// never shifts another.
std::mt19937_64 instance_rng(std::uint64_t stream, std::uint64_t instance);

// K x L real Gaussian matrix with unit-norm rows, stored as complex.
CMatrix random_frame(int K, int L, std::mt19937_64& rng);
// Haar-distributed real orthonormal K x K matrix.
CMatrix random_orthonormal(int K, std::mt19937_64& rng);
RVector random_gaussian(int n, std::mt19937_64& rng, double scale = 1.0);
double random_uniform(double lo, double hi, std::mt19937_64& rng);

}  // namespace sdsn
