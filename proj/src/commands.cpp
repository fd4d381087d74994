// SPDX-License-Identifier: Apache-2.0
#include "sdsn/commands.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "sdsn/matrix_io.hpp"
#include "sdsn/oracle.hpp"
#include "sdsn/wav.hpp"

namespace sdsn {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const InvalidParameter*>(&e)) return kExitUsage;
  return kExitNumerical;
}

std::uint64_t filterbank_hash(const FilterBank& bank, std::uint64_t h) {
  const auto mix = [&h](double d) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  for (Eigen::Index r = 0; r < bank.filters_time.rows(); ++r) {
    for (Eigen::Index c = 0; c < bank.filters_time.cols(); ++c) {
      mix(bank.filters_time(r, c).real());
      mix(bank.filters_time(r, c).imag());
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

FilterBank layer1_bank(const RunConfig& cfg) {
  const ScaleSet scales = make_scales(cfg.J1, cfg.Q1);
  const WaveletSpec spec = wavelet_spec(cfg);
  return build_filterbank(scales, spec, minimum_fft_size(scales, spec));
}

RVector as_vector(const Signal& s) { return Eigen::Map<const RVector>(s.samples.data(), s.size()); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text;
  if (!os) throw IoError("write failed for " + path);
}

nlohmann::json bank_json(const FilterBank& bank) {
  nlohmann::json j;
  j["family"] = family_name(bank.wavelet.family);
  j["J"] = bank.scales.J;
  j["Q"] = bank.scales.Q;
  j["normalization"] = normalization_name(bank.wavelet.normalization);
  j["n_fft"] = bank.n_fft;
  j["length"] = bank.length();
  if (bank.wavelet.family == Family::Morlet) {
    j["omega0"] = bank.wavelet.morlet.omega0;
    j["dt"] = bank.wavelet.morlet.dt;
  } else {
    j["m"] = bank.gammatone.m;
    j["r"] = bank.gammatone.r;
    j["xi"] = bank.gammatone.xi;
    j["sigma"] = bank.gammatone.sigma;
  }
  j["hash"] = hex64(filterbank_hash(bank));
  return j;
}

RMatrix mask_matrix(const ThresholdMask& m) { return m.delta.cast<double>(); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

double cmd_scalogram(const std::string& input, const RunConfig& cfg, const std::string& out, std::ostream& log) {
  const WavAudio audio = read_wav(input);
  const FilterBank bank = layer1_bank(cfg);
  const RMatrix mag = modulus(cwt(as_vector(audio.signal), bank));
  write_csv(out + ".csv", mag);
  write_matrix(out + ".fcm", mag);
  const double alpha = sparsity_ratio(mag, cfg.zero_tol);
  log << "scalogram " << mag.rows() << " x " << mag.cols() << " (" << audio.info.sample_rate << " Hz)\n";
  log << "alpha " << alpha << "\n";
  return alpha;
}

DenoiseReport cmd_denoise(const std::string& input, const RunConfig& cfg, const std::string& out, std::ostream& log) {
  const WavAudio audio = read_wav(input);
  const FilterBank bank = layer1_bank(cfg);
  const LocalFrame frame = local_frame(bank);
  const Signal unit = normalize_energy(audio.signal);
  const Scalogram s = cwt(as_vector(unit), bank);
  const MaskResult m = threshold_mask(s, frame, cfg.window, noise_config(cfg));
  const RMatrix noisy = modulus(s);
  const RMatrix denoised = apply_mask(noisy, m.mask);

  write_csv(out + "_noisy.csv", noisy);
  write_matrix(out + "_noisy.fcm", noisy);
  write_csv(out + "_denoised.csv", denoised);
  write_matrix(out + "_denoised.fcm", denoised);
  write_matrix(out + "_mask.fcm", mask_matrix(m.mask));

  DenoiseReport r;
  r.alpha_before = sparsity_ratio(noisy, cfg.zero_tol);
  r.alpha_after = sparsity_ratio(denoised, cfg.zero_tol);
  r.window_sigma = m.risk.window_sigma;
  log << "risk mode " << risk_mode_name(cfg.risk_mode) << ", " << r.window_sigma.size() << " window(s)\n";
  for (size_t w = 0; w < r.window_sigma.size(); ++w) log << "  sigma[" << w << "] " << r.window_sigma[w] << "\n";
  log << "alpha before " << r.alpha_before << "\n";
  log << "alpha after  " << r.alpha_after << "\n";
  return r;
}

ScatterReport cmd_scatter(const std::vector<std::string>& inputs, const RunConfig& cfg, const std::string& out,
                          std::ostream& log) {
  const ScatteringNetwork net(scattering_config(cfg));
  ScatterReport report;
  std::vector<RVector> rows;
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();

  for (const std::string& path : inputs) {
    try {
      const WavAudio audio = read_wav(path);
      const ScatteringOutput f = net.forward(audio.signal);
      if (!rows.empty() && f.features.size() != rows.front().size()) {
        throw DimensionMismatch("feature length " + std::to_string(f.features.size()) +
                                " differs from the first record (" + std::to_string(rows.front().size()) + ")");
      }
      records.push_back({{"row", rows.size()},
                         {"input", path},
                         {"sample_rate", audio.info.sample_rate},
                         {"samples", audio.signal.size()},
                         {"alpha_layer1", sparsity_ratio(f.layer1.U1T, cfg.zero_tol)}});
      rows.push_back(f.features);
      log << path << ": " << f.features.size() << " features\n";
    } catch (const Error& e) {
      report.failures.push_back(path + ": " + e.what());
      failures.push_back({{"input", path}, {"error", e.what()}});
      if (report.exit_code == kExitOk) report.exit_code = exit_code_for(e);
      log << path << ": error: " << e.what() << "\n";
    }
  }

  const Eigen::Index width = rows.empty() ? net.feature_length(0) : rows.front().size();
  RMatrix features(static_cast<Eigen::Index>(rows.size()), width);
  for (size_t i = 0; i < rows.size(); ++i) features.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  write_matrix(out + ".fcm", features);

  nlohmann::json side;
  side["format"] = "FCM1";
  side["tag"] = cfg.sparse ? "sdsn" : "dsn";
  side["sparse"] = cfg.sparse;
  side["layout"] = cfg.pooling == Pooling::Mean
                       ? "S1 time means (j1), then S2 time means (j2 outer, j1 inner)"
                       : "S1 (j1 outer, t inner), then S2 (j2, j1, t) row-major";
  side["features"] = width;
  side["config"] = nlohmann::json::parse(config_to_json(cfg));
  side["layer1"] = bank_json(net.bank1());
  side["layer2"] = bank_json(net.bank2());
  side["filterbank_hash"] = hex64(filterbank_hash(net.bank2(), filterbank_hash(net.bank1())));
  side["records"] = records;
  side["failures"] = failures;
  write_text(out + ".json", side.dump(2) + "\n");

  report.records = static_cast<int>(rows.size());
  return report;
}

void cmd_filters(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  const FilterBank bank = layer1_bank(cfg);
  write_matrix(out + "_time.fcm", bank.filters_time);
  write_matrix(out + "_freq.fcm", bank.filters_freq);
  write_text(out + ".json", bank_json(bank).dump(2) + "\n");
  log << bank.size() << " filters, length " << bank.length() << ", n_fft " << bank.n_fft << "\n";
}

std::vector<SelfCheckRow> cmd_selfcheck(const RunConfig& cfg, std::ostream& log) {
  std::vector<SelfCheckRow> rows;
  const auto add = [&](std::string name, bool ok, std::string detail) {
    rows.push_back({std::move(name), ok ? "pass" : "fail", std::move(detail)});
  };
  const std::uint64_t stream = cfg.seed;

  // Orthonormal frames: the bound is the classical per-coefficient oracle risk.
  if (cfg.risk_mode == RiskMode::Pseudocode) {
    rows.push_back({"orthogonal coincidence", "skipped", "compatibility mode, skipped"});
  } else {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      auto rng = instance_rng(stream * 16 + 1, static_cast<std::uint64_t>(i));
      const int K = 2 + static_cast<int>(rng() % 11);
      const LocalFrame f = make_local_frame(random_orthonormal(K, rng));
      const RVector x = random_gaussian(K, rng, random_uniform(0.1, 3.0, rng));
      const double sigma = random_uniform(0.05, 2.0, rng);
      const CVector mu = f.W * x.cast<Complex>();
      const RVector a = risk_unselected(mu, f);
      const RVector b = risk_selected(f, sigma, cfg.risk_mode);
      double expected = 0.0;
      for (int k = 0; k < K; ++k) expected += std::min(std::norm(mu[k]), sigma * sigma);
      const double got = a.cwiseMin(b).sum();
      worst = std::max(worst, std::abs(got - expected) / std::max(expected, 1e-300));
    }
    add("orthogonal coincidence", worst <= 1e-9, "max rel err " + num(worst));
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      auto rng = instance_rng(stream * 16 + 2, static_cast<std::uint64_t>(i));
      const int K = 3 + static_cast<int>(rng() % 6);
      const int L = 2 + static_cast<int>(rng() % (K - 1));
      const LocalFrame f = make_local_frame(random_frame(K, L, rng));
      const RVector x = random_gaussian(L, rng);
      const RVector y = x + random_gaussian(L, rng, 0.5);
      const RVector b = risk_selected(f, 0.5, cfg.risk_mode);
      const BinaryVector all = BinaryVector::Ones(K);
      const double rx = risk_under_mask(risk_unselected(f.W * x.cast<Complex>(), f), b, all);
      const double ry = risk_under_mask(risk_unselected(f.W * y.cast<Complex>(), f), b, all);
      worst = std::max(worst, std::abs(rx - ry));
    }
    add("full-selection equality", worst <= 1e-12, "max abs diff " + num(worst));
  }

  {
    const LocalFrame f = local_frame(layer1_bank(cfg));
    const MoorePenroseReport r = verify_moore_penrose(f);
    add("Moore-Penrose, layer-1 frame",
        r.pass, "residuals " + num(r.residuals[0]) + " " + num(r.residuals[1]) + " " +
                    num(r.residuals[2]) + " " + num(r.residuals[3]));
  }
  {
    auto rng = instance_rng(stream * 16 + 3, 0);
    const MoorePenroseReport r = verify_moore_penrose(make_local_frame(random_frame(8, 5, rng)));
    add("Moore-Penrose, random 8x5", r.pass, "max residual " + num(*std::max_element(r.residuals.begin(), r.residuals.end())));
  }

  {
    double min_margin = INFINITY;
    int violations = 0;
    double worst_z = 0.0;
    for (int i = 0; i < 200; ++i) {
      auto rng = instance_rng(stream * 16 + 4, static_cast<std::uint64_t>(i));
      const LocalFrame f = make_local_frame(random_frame(4, 3, rng));
      const RVector x = random_gaussian(3, rng, random_uniform(0.1, 3.0, rng));
      const double sigma = random_uniform(0.1, 2.0, rng);
      const CVector mu = f.W * x.cast<Complex>();
      const EnumerationResult best = brute_force_ideal_mask(mu, f, sigma);
      const double margin = upper_bound_risk(mu, f, sigma) - best.best_risk;
      min_margin = std::min(min_margin, margin);
      if (margin < -1e-12 * std::max(1.0, best.best_risk)) ++violations;
      if (i < 20) {
        const McEstimate mc = mc_realized_mse(x, f, sigma, best.best_delta, 4000, rng());
        // Masks that select nothing give a deterministic error, hence the floor.
        const double slack = std::max(mc.std_error, 1e-9 * std::max(1.0, best.best_risk));
        worst_z = std::max(worst_z, std::abs(mc.mean - best.best_risk) / slack);
      }
    }
    add("dominance probe, K=4", violations == 0,
        std::to_string(violations) + " violations, min margin " + num(min_margin));
    add("Monte-Carlo vs ideal risk", worst_z <= 4.0, "max |z| " + num(worst_z));
  }

  for (const SelfCheckRow& r : rows) log << r.status << "\t" << r.name << "\t" << r.detail << "\n";
  return rows;
}

}  // namespace sdsn
