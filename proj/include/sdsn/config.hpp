// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdsn/scattering.hpp"

namespace sdsn {

// Flat run configuration. Text form is either `key = value` lines (with
// `#` comments) or a single JSON object with the same keys.
//
//   family            gammatone | morlet           (gammatone)
//   J1, Q1, J2, Q2    layer scales                 (5, 8, 4, 1)
//   gammatone_order   m                            (4)
//   gammatone_r       bandwidth level r            (0.5)
//   morlet_omega0     center frequency             (6)
//   morlet_dt         sampling step                (1/3)
//   normalization     energy | amplitude           (energy)
//   window            samples per sigma window     (65536)
//   estimator         mad | std                    (mad)
//   noise_component   real | modulus               (real)
//   risk_mode         bound | pseudocode           (bound)
//   signal_units      true | false                 (true)
//   sigma             auto | fixed value           (auto)
//   sparse            true | false                 (true)
//   decimation1/2     0 = 2^J                      (0, 0)
//   pooling           mean | time                  (mean)
//   zero_tol          sparsity zero threshold      (0)
//   seed              self-check RNG seed          (1)
struct RunConfig {
  Family family = Family::Gammatone;
  int J1 = 5, Q1 = 8, J2 = 4, Q2 = 1;
  int gammatone_order = 4;
  double gammatone_r = 0.5;
  double morlet_omega0 = 6.0;
  double morlet_dt = 1.0 / 3.0;
  Normalization normalization = Normalization::Energy;
  int window = 1 << 16;
  Estimator estimator = Estimator::Mad;
  NoiseComponent noise_component = NoiseComponent::Real;
  RiskMode risk_mode = RiskMode::Bound;
  bool signal_units = true;
  std::optional<double> sigma;
  bool sparse = true;
  int decimation1 = 0, decimation2 = 0;
  Pooling pooling = Pooling::Mean;
  double zero_tol = 0.0;
  std::uint64_t seed = 1;
};

// Throws InvalidParameter naming the key on unknown keys or bad values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Canonical JSON text (sorted keys, fixed formatting).
std::string config_to_json(const RunConfig& cfg);

WaveletSpec wavelet_spec(const RunConfig& cfg);
NoiseConfig noise_config(const RunConfig& cfg);
ScatteringConfig scattering_config(const RunConfig& cfg);

}  // namespace sdsn
