// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdsn/config.hpp"

namespace sdsn {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitNumerical = 3 };

int exit_code_for(const std::exception& e);

// FNV-1a over the little-endian bytes of the time-domain filters.
std::uint64_t filterbank_hash(const FilterBank& bank, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// Writes <out>.csv and <out>.fcm (scalogram modulus). Returns alpha.
double cmd_scalogram(const std::string& input, const RunConfig& cfg, const std::string& out, std::ostream& log);

struct DenoiseReport {
  double alpha_before = 0.0;
  double alpha_after = 0.0;
  std::vector<double> window_sigma;
};

// Writes <out>_noisy, <out>_denoised (csv + fcm) and <out>_mask.fcm.
DenoiseReport cmd_denoise(const std::string& input, const RunConfig& cfg, const std::string& out, std::ostream& log);

struct ScatterReport {
  int records = 0;
  std::vector<std::string> failures;  // "path: message"
  int exit_code = kExitOk;
};

// Writes <out>.fcm (one feature row per successful input, input order)
// and the <out>.json sidecar.
ScatterReport cmd_scatter(const std::vector<std::string>& inputs, const RunConfig& cfg, const std::string& out,
                          std::ostream& log);

// Writes <out>_time.fcm, <out>_freq.fcm and <out>.json for the layer-1 bank.
void cmd_filters(const RunConfig& cfg, const std::string& out, std::ostream& log);

struct SelfCheckRow {
  std::string name;
  std::string status;  // "pass", "fail" or "skipped"
  std::string detail;
};

std::vector<SelfCheckRow> cmd_selfcheck(const RunConfig& cfg, std::ostream& log);

}  // namespace sdsn
