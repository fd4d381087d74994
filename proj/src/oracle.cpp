// SPDX-License-Identifier: Apache-2.0
#include "sdsn/oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace sdsn {

EnumerationResult brute_force_ideal_mask(const CVector& x_coeffs, const LocalFrame& frame, double sigma,
                                         bool keep_all) {
  const int K = static_cast<int>(x_coeffs.size());
  if (K != frame.size()) throw DimensionMismatch("brute_force_ideal_mask: coefficient count != frame size");
  if (K > kMaxEnumerationSize) {
    throw InvalidParameter("brute_force_ideal_mask: K = " + std::to_string(K) + " exceeds the enumeration limit of " +
                           std::to_string(kMaxEnumerationSize));
  }

  // risk(S) = sum_{U x U} M + sigma^2 sum_{S x S} N with both M and N real
  // symmetric because gd and ga are Hermitian.
  RMatrix M(K, K), N(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      M(i, j) = (std::conj(x_coeffs[i]) * x_coeffs[j] * frame.gram_dual(i, j)).real();
      N(i, j) = sigma * sigma * (frame.gram_dual(i, j) * frame.gram_analysis(j, i)).real();
    }
  }

  // Start from S = {} so U is everything.
  RVector row_u = M.rowwise().sum();
  RVector row_s = RVector::Zero(K);
  double unselected = M.sum();
  double selected = 0.0;

  const std::uint64_t total = std::uint64_t{1} << K;
  std::uint64_t best_code = 0;
  double best = unselected;
  EnumerationResult out;
  if (keep_all) out.risks_all = std::vector<double>(total, 0.0);
  if (keep_all) (*out.risks_all)[0] = best;

  std::uint64_t code = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int k = std::countr_zero(step);
    const std::uint64_t bit = std::uint64_t{1} << k;
    if ((code & bit) == 0) {
      unselected -= 2.0 * row_u[k] - M(k, k);
      row_u -= M.col(k);
      selected += 2.0 * row_s[k] + N(k, k);
      row_s += N.col(k);
    } else {
      selected -= 2.0 * row_s[k] - N(k, k);
      row_s -= N.col(k);
      unselected += 2.0 * row_u[k] + M(k, k);
      row_u += M.col(k);
    }
    code ^= bit;
    const double r = unselected + selected;
    if (keep_all) (*out.risks_all)[code] = r;
    if (r < best) {
      best = r;
      best_code = code;
    }
  }

  out.best_delta.resize(K);
  for (int i = 0; i < K; ++i) out.best_delta[i] = (best_code >> i) & 1U;
  out.best_risk = ideal_risk_given_mask(x_coeffs, frame, sigma, out.best_delta);
  return out;
}

McEstimate mc_realized_mse(const RVector& x, const LocalFrame& frame, double sigma, const BinaryVector& delta,
                           int draws, std::uint64_t seed) {
  if (draws < 100) throw InvalidParameter("mc_realized_mse: draws must be >= 100");
  if (x.size() != frame.length()) throw DimensionMismatch("mc_realized_mse: signal length != frame length");
  if (delta.size() != frame.size()) throw DimensionMismatch("mc_realized_mse: mask length != frame size");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const CVector keep = delta.cast<double>().cast<Complex>();
  const CVector cx = x.cast<Complex>();
  RVector noise(x.size());

  // Welford accumulation keeps the variance accurate when mean >> spread.
  double mean = 0.0, m2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = sigma * gauss(rng);
    const CVector mu = frame.W * (cx + noise.cast<Complex>());
    const CVector xhat = frame.Wd * keep.cwiseProduct(mu);
    const double err = (cx - xhat).squaredNorm();
    const double delta_mean = err - mean;
    mean += delta_mean / (d + 1);
    m2 += delta_mean * (err - mean);
  }
  McEstimate out;
  out.mean = mean;
  out.std_error = std::sqrt(m2 / (draws - 1) / draws);
  return out;
}

namespace {

// ||X Y||_F without forming X Y: a tall X is replaced by its R factor.
double product_norm(const CMatrix& X, const CMatrix& Y) {
  if (X.rows() <= X.cols()) return (X * Y).norm();
  const Eigen::HouseholderQR<CMatrix> qr(X);
  const CMatrix R = qr.matrixQR().topRows(X.cols()).triangularView<Eigen::Upper>();
  return (R * Y).norm();
}

}  // namespace

MoorePenroseReport verify_moore_penrose(const CMatrix& W, const CMatrix& Wd, double tolerance) {
  if (Wd.rows() != W.cols() || Wd.cols() != W.rows()) {
    throw DimensionMismatch("verify_moore_penrose: Wd must be the shape of W transposed");
  }
  const auto rel = [](double diff, double scale) { return scale > 0.0 ? diff / scale : diff; };
  const CMatrix P = W * Wd;
  MoorePenroseReport out;
  out.tolerance = tolerance;
  out.residuals[0] = rel((P * W - W).norm(), W.norm());
  out.residuals[1] = rel((Wd * P - Wd).norm(), Wd.norm());
  out.residuals[2] = rel((P.adjoint() - P).norm(), P.norm());
  // Wd W is L x L; (Wd W)^H - Wd W = [W^H, -Wd] [Wd^H; W] keeps it factored.
  CMatrix left(W.cols(), 2 * W.rows());
  left << W.adjoint(), -Wd;
  CMatrix right(2 * W.rows(), W.cols());
  right << Wd.adjoint(), W;
  out.residuals[3] = rel(product_norm(left, right), product_norm(Wd, W));
  out.pass = true;
  for (double r : out.residuals) out.pass = out.pass && r <= tolerance;
  return out;
}

MoorePenroseReport verify_moore_penrose(const LocalFrame& frame, double tolerance) {
  return verify_moore_penrose(frame.W, frame.Wd, tolerance);
}

std::mt19937_64 instance_rng(std::uint64_t stream, std::uint64_t instance) {
  std::seed_seq seq{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(instance), static_cast<std::uint32_t>(instance >> 32)};
  return std::mt19937_64(seq);
}

RVector random_gaussian(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  RVector v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

double random_uniform(double lo, double hi, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CMatrix random_frame(int K, int L, std::mt19937_64& rng) {
  RMatrix W(K, L);
  for (int k = 0; k < K; ++k) {
    RVector row = random_gaussian(L, rng);
    W.row(k) = row.transpose() / row.norm();
  }
  return W.cast<Complex>();
}

CMatrix random_orthonormal(int K, std::mt19937_64& rng) {
  RMatrix G(K, K);
  for (int c = 0; c < K; ++c) G.col(c) = random_gaussian(K, rng);
  Eigen::HouseholderQR<RMatrix> qr(G);
  RMatrix Q = qr.householderQ();
  // Sign fix on R's diagonal makes the distribution Haar.
  const RMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < K; ++c) {
    if (R(c, c) < 0.0) Q.col(c) *= -1.0;
  }
  return Q.cast<Complex>();
}

}  // namespace sdsn
