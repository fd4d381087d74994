// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "sdsn/oracle.hpp"
#include "sdsn/risk.hpp"
#include "support.hpp"

using namespace sdsn;

namespace {

// Closed-form pseudoinverse of the 3 x 2 frame, (W^T W)^-1 W^T.
RMatrix analytic_tight_dual() {
  const double h = 1.0 / std::sqrt(2.0);
  RMatrix inv(2, 2);
  inv << 0.75, -0.25, -0.25, 0.75;
  RMatrix Wt(2, 3);
  Wt << 1.0, 0.0, h, 0.0, 1.0, h;
  return inv * Wt;
}

CMatrix coefficient_window(const RMatrix& re) { return re.cast<Complex>(); }

}  // namespace

TEST_CASE("estimate_sigma") {
  const CMatrix constant = CMatrix::Constant(4, 25, Complex(2.5, -1.0));
  CHECK(estimate_sigma(constant, Estimator::Mad).sigma_hat == 0.0);
  CHECK(estimate_sigma(constant, Estimator::StdLiteral).sigma_hat == 0.0);

  auto rng = instance_rng(401, 0);
  RMatrix re(100, 1000);
  for (Eigen::Index c = 0; c < re.cols(); ++c) re.col(c) = random_gaussian(100, rng);
  const NoiseEstimate mad = estimate_sigma(coefficient_window(re), Estimator::Mad);
  CHECK(mad.sigma_hat >= 0.97);
  CHECK(mad.sigma_hat <= 1.03);
  CHECK(mad.constant == 0.6745);

  const NoiseEstimate lit = estimate_sigma(coefficient_window(re), Estimator::StdLiteral);
  CHECK(lit.constant == 0.67);
  CHECK(lit.sigma_hat == doctest::Approx(1.0 / 0.67).epsilon(0.02));

  // Complex white noise with unit variance per component: moduli are
  // Rayleigh(1) with median sqrt(2 ln 2).
  CMatrix z(100, 1000);
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const RVector a = random_gaussian(100, rng), b = random_gaussian(100, rng);
    for (int r = 0; r < 100; ++r) z(r, c) = Complex(a[r], b[r]);
  }
  const double s = estimate_sigma(z, Estimator::Mad, NoiseComponent::Modulus).sigma_hat;
  CHECK(s >= 0.97);
  CHECK(s <= 1.03);

  // Odd and even sample counts take the proper median.
  CMatrix odd(1, 3);
  odd << 1.0, 2.0, 10.0;
  CHECK(estimate_sigma(odd).sigma_hat == doctest::Approx(1.0 / 0.6745));
  CMatrix even(1, 4);
  even << 1.0, 2.0, 4.0, 10.0;
  // median 3, deviations {2, 1, 1, 7}, MAD 1.5.
  CHECK(estimate_sigma(even).sigma_hat == doctest::Approx(1.5 / 0.6745));
}

TEST_CASE("risk terms under the identity frame") {
  const LocalFrame id = make_local_frame(CMatrix::Identity(4, 4));
  CVector mu(4);
  mu << 2.0, -0.5, Complex(0.0, 3.0), 0.0;
  const RVector a = risk_unselected(mu, id);
  for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(std::norm(mu[k])));
  CHECK(risk_unselected(CVector::Zero(4), id).isZero(0.0));
  const RVector b = risk_selected(id, 0.7);
  for (int k = 0; k < 4; ++k) CHECK(b[k] == doctest::Approx(0.49));
  CHECK(risk_selected(id, 0.0).isZero(0.0));
  CHECK_THROWS_AS(risk_unselected(CVector::Zero(3), id), DimensionMismatch);
}

TEST_CASE("risk terms on the 3-filter frame: two independent paths") {
  const LocalFrame f = make_local_frame(testing::tight_frame_3x2());
  const RMatrix Wd = analytic_tight_dual();
  const RMatrix W = testing::tight_frame_3x2().real();
  CVector mu(3);
  mu << 1.0, 1.0, std::sqrt(2.0);

  // Path 1: explicit double sums over analytic filters.
  RVector a(3), b(3);
  for (int k = 0; k < 3; ++k) {
    double ak = 0.0, bk = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double gd = Wd.col(k).dot(Wd.col(j));
      const double ga = W.row(k).dot(W.row(j));
      ak += std::abs(mu[k]) * std::abs(mu[j]) * std::abs(gd);
      bk += std::abs(gd * ga);
    }
    a[k] = ak;
    b[k] = bk;
  }
  // Path 2: library matrix expressions.
  CHECK((risk_unselected(mu, f) - a).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((risk_selected(f, 1.0) - b).cwiseAbs().maxCoeff() <= 1e-12);

  // Pseudocode mode: sigma * sum_j |gd_kj|^2.
  RVector pc(3);
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) acc += std::pow(Wd.col(k).dot(Wd.col(j)), 2);
    pc[k] = 0.5 * acc;
  }
  CHECK((risk_selected(f, 0.5, RiskMode::Pseudocode) - pc).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("threshold_mask reduces to the empirical Donoho rule on the identity frame") {
  const LocalFrame id = make_local_frame(CMatrix::Identity(6, 6));
  auto rng = instance_rng(402, 0);
  RMatrix re(6, 40);
  for (Eigen::Index c = 0; c < re.cols(); ++c) re.col(c) = random_gaussian(6, rng, 1.5);
  const CMatrix coeffs = re.cast<Complex>();
  const MaskResult m = threshold_mask(coeffs, id, 40);
  const double s = estimate_sigma(coeffs).sigma_hat;
  REQUIRE(m.risk.window_sigma.size() == 1);
  CHECK(m.risk.window_sigma[0] == doctest::Approx(s));
  for (int t = 0; t < 40; ++t) {
    for (int k = 0; k < 6; ++k) CHECK(m.mask.delta(k, t) == (re(k, t) * re(k, t) > s * s ? 1 : 0));
  }
  double chosen = 0.0;
  for (int t = 0; t < 40; ++t) {
    for (int k = 0; k < 6; ++k) chosen += std::min(re(k, t) * re(k, t), s * s);
  }
  CHECK(m.risk.chosen_risk == doctest::Approx(chosen).epsilon(1e-12));
}

TEST_CASE("threshold_mask limits and ties") {
  const LocalFrame f = make_local_frame(testing::tight_frame_3x2());
  CMatrix coeffs(3, 4);
  coeffs << 1.0, 0.0, -2.0, 0.5, Complex(0, 1), 0.0, 0.1, 3.0, 0.2, 0.0, 1.0, -1.0;

  NoiseConfig huge;
  huge.fixed_sigma = 1e6;
  CHECK(threshold_mask(coeffs, f, 4, huge).mask.delta.cast<int>().sum() == 0);

  NoiseConfig zero;
  zero.fixed_sigma = 0.0;
  const ThresholdMask all = threshold_mask(coeffs, f, 4, zero).mask;
  for (int t = 0; t < 4; ++t) {
    for (int k = 0; k < 3; ++k) CHECK(all.delta(k, t) == (coeffs(k, t) != Complex(0, 0) ? 1 : 0));
  }

  // a_k = |mu_k|^2 = sigma^2 = b_k on the identity frame: not selected.
  const LocalFrame id = make_local_frame(CMatrix::Identity(2, 2));
  CMatrix tie(2, 2);
  tie << 0.5, 0.5000001, -0.5, 0.4999999;
  NoiseConfig half;
  half.fixed_sigma = 0.5;
  const ThresholdMask m = threshold_mask(tie, id, 2, half).mask;
  CHECK(m.delta(0, 0) == 0);
  CHECK(m.delta(1, 0) == 0);
  CHECK(m.delta(0, 1) == 1);
  CHECK(m.delta(1, 1) == 0);

  CHECK_THROWS_AS(threshold_mask(coeffs, f, 1), InvalidParameter);
  CHECK_THROWS_AS(threshold_mask(CMatrix::Zero(4, 4), f, 4), DimensionMismatch);
}

TEST_CASE("threshold_mask estimates sigma per window") {
  const LocalFrame id = make_local_frame(CMatrix::Identity(3, 3));
  auto rng = instance_rng(403, 0);
  RMatrix re(3, 100);
  for (Eigen::Index c = 0; c < 100; ++c) re.col(c) = random_gaussian(3, rng, c < 50 ? 0.1 : 5.0);
  const MaskResult m = threshold_mask(CMatrix(re.cast<Complex>()), id, 50);
  REQUIRE(m.risk.window_sigma.size() == 2);
  CHECK(m.risk.window_sigma[1] > 10 * m.risk.window_sigma[0]);
  CHECK(m.risk.sigma_at(10) == m.risk.window_sigma[0]);
  CHECK(m.risk.sigma_at(99) == m.risk.window_sigma[1]);
  CHECK(m.risk.b(1, 60) == doctest::Approx(m.risk.window_sigma[1] * m.risk.window_sigma[1]));
}

TEST_CASE("threshold_mask: monotone in sigma, scale equivariant, never densifies") {
  for (int inst = 0; inst < 20; ++inst) {
    auto rng = instance_rng(404, static_cast<std::uint64_t>(inst));
    const int L = 3 + static_cast<int>(rng() % 4);
    const int K = L + 2;
    const LocalFrame f = make_local_frame(random_frame(K, L, rng));
    RMatrix x(L, 30);
    for (int c = 0; c < 30; ++c) x.col(c) = random_gaussian(L, rng);
    const CMatrix mu = f.W * x.cast<Complex>();

    BinaryMatrix previous = BinaryMatrix::Ones(K, 30);
    for (int i = 0; i < 20; ++i) {
      NoiseConfig nc;
      nc.fixed_sigma = 0.05 * (i + 1);
      const BinaryMatrix d = threshold_mask(mu, f, 30, nc).mask.delta;
      CHECK(((d.array() == 1) && (previous.array() == 0)).count() == 0);
      previous = d;
    }

    const BinaryMatrix base = threshold_mask(mu, f, 30).mask.delta;
    const BinaryMatrix scaled = threshold_mask(CMatrix(3.7 * mu), f, 30).mask.delta;
    CHECK(base == scaled);

    const ThresholdMask m{base};
    CHECK(sparsity_ratio(apply_mask(mu, m)) >= sparsity_ratio(mu));
  }
}

TEST_CASE("apply_mask") {
  CMatrix s(2, 3);
  s << 1, 2, 3, 4, 5, 6;
  const ThresholdMask ones{BinaryMatrix::Ones(2, 3)};
  const ThresholdMask zeros{BinaryMatrix::Zero(2, 3)};
  CHECK(apply_mask(s, ones) == s);
  CHECK(apply_mask(s, zeros).isZero(0.0));
  ThresholdMask some{BinaryMatrix::Zero(2, 3)};
  some.delta(0, 1) = 1;
  some.delta(1, 2) = 1;
  const CMatrix once = apply_mask(s, some);
  CHECK(apply_mask(once, some) == once);
  CHECK(once(0, 1) == Complex(2, 0));
  CHECK(once(0, 0) == Complex(0, 0));
  CHECK_THROWS_AS(apply_mask(s, ThresholdMask{BinaryMatrix::Ones(3, 2)}), DimensionMismatch);
  const RMatrix r = apply_mask(RMatrix(s.real()), some);
  CHECK(r(1, 2) == 6.0);
}

TEST_CASE("ideal_risk_given_mask") {
  auto rng = instance_rng(405, 0);
  const int K = 5;
  const LocalFrame o = make_local_frame(random_orthonormal(K, rng));
  const RVector x = random_gaussian(K, rng);
  const CVector mu = o.W * x.cast<Complex>();
  const double sigma = 0.8;
  CHECK(ideal_risk_given_mask(mu, o, sigma, BinaryVector::Ones(K)) == doctest::Approx(K * sigma * sigma));
  CHECK(ideal_risk_given_mask(mu, o, sigma, BinaryVector::Zero(K)) == doctest::Approx(mu.squaredNorm()));

  const LocalFrame id = make_local_frame(CMatrix::Identity(K, K));
  BinaryVector d(K);
  d << 1, 0, 0, 1, 1;
  double expected = 3 * sigma * sigma;
  for (int i : {1, 2}) expected += x[i] * x[i];
  CHECK(ideal_risk_given_mask(x.cast<Complex>(), id, sigma, d) == doctest::Approx(expected));

  // Squared-norm path: ||Wd D_U mu||^2 + sigma^2 ||Wd D_S W||_F^2.
  for (int inst = 0; inst < 20; ++inst) {
    auto r2 = instance_rng(406, static_cast<std::uint64_t>(inst));
    const LocalFrame f = make_local_frame(random_frame(7, 4, r2));
    const CVector m = f.W * random_gaussian(4, r2).cast<Complex>();
    BinaryVector sel(7);
    for (int k = 0; k < 7; ++k) sel[k] = r2() & 1U;
    const RVector s = sel.cast<double>();
    const RVector u = RVector::Ones(7) - s;
    const double direct = (f.Wd * u.cast<Complex>().asDiagonal() * m).squaredNorm() +
                          0.09 * (f.Wd * s.cast<Complex>().asDiagonal() * f.W).squaredNorm();
    CHECK(ideal_risk_given_mask(m, f, 0.3, sel) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("upper_bound_risk") {
  auto rng = instance_rng(407, 0);
  const LocalFrame o = make_local_frame(random_orthonormal(6, rng));
  const CVector mu = o.W * random_gaussian(6, rng).cast<Complex>();
  double expected = 0.0;
  for (int k = 0; k < 6; ++k) expected += std::min(std::norm(mu[k]), 0.36);
  CHECK(upper_bound_risk(mu, o, 0.6) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(upper_bound_risk(CVector::Zero(6), o, 0.6) == 0.0);

  for (int inst = 0; inst < 200; ++inst) {
    auto r = instance_rng(408, static_cast<std::uint64_t>(inst));
    const LocalFrame f = make_local_frame(random_frame(6, 4, r));
    const CVector m = f.W * random_gaussian(4, r, random_uniform(0.1, 3.0, r)).cast<Complex>();
    const double sigma = random_uniform(0.05, 2.0, r);
    const double best = brute_force_ideal_mask(m, f, sigma).best_risk;
    CHECK(upper_bound_risk(m, f, sigma) >= best - 1e-12 * std::max(1.0, best));
  }
}

TEST_CASE("donoho_orthogonal_mask") {
  CVector mu(2);
  mu << 2.0, 0.5;
  CHECK(donoho_orthogonal_mask(mu, 1.0) == (BinaryVector(2) << 1, 0).finished());
  CVector z(3);
  z << 0.0, 1e-9, -4.0;
  CHECK(donoho_orthogonal_mask(z, 0.0) == (BinaryVector(3) << 0, 1, 1).finished());

  const LocalFrame id = make_local_frame(CMatrix::Identity(8, 8));
  for (int inst = 0; inst < 500; ++inst) {
    auto r = instance_rng(409, static_cast<std::uint64_t>(inst));
    const CVector m = random_gaussian(8, r).cast<Complex>();
    const double sigma = random_uniform(0.1, 2.0, r);
    CHECK(brute_force_ideal_mask(m, id, sigma).best_delta == donoho_orthogonal_mask(m, sigma));
  }
}

TEST_CASE("sparsity_ratio") {
  CHECK(sparsity_ratio(RMatrix::Zero(3, 4)) == 1.0);
  CHECK(sparsity_ratio(RMatrix::Ones(3, 4)) == 0.0);
  RMatrix half = RMatrix::Ones(2, 4);
  half.row(1).setZero();
  CHECK(sparsity_ratio(half) == 0.5);
  CMatrix c = CMatrix::Constant(2, 2, Complex(0, 1e-3));
  CHECK(sparsity_ratio(c) == 0.0);
  CHECK(sparsity_ratio(c, 1e-2) == 1.0);
}

TEST_CASE("unselected_risk_bound") {
  auto rng = instance_rng(410, 0);
  const LocalFrame f = make_local_frame(random_frame(5, 3, rng));
  const CVector mu = f.W * random_gaussian(3, rng).cast<Complex>();
  CHECK(unselected_risk_bound(mu, f, 0.0) == doctest::Approx(upper_bound_risk(mu, f, 0.0)));

  // x = 0, identity: only the diagonal sigma^2 (1 - 2/pi) terms survive.
  const LocalFrame id = make_local_frame(CMatrix::Identity(4, 4));
  const double sigma = 1.3;
  CHECK(unselected_risk_bound(CVector::Zero(4), id, sigma) ==
        doctest::Approx(4 * sigma * sigma * (1.0 - 2.0 / kPi)).epsilon(1e-12));
}
