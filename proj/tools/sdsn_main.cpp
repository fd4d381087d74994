// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdsn/commands.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<bool> sparse;
  std::optional<int> window;
  std::optional<std::string> estimator;
  bool compat_pseudocode = false;
  std::optional<std::uint64_t> seed;
  std::string out = "sdsn_out";
};

void add_common(CLI::App* app, Common& c, bool with_out) {
  app->add_option("--config", c.config_path, "key=value or JSON config file");
  app->add_flag("--sparse,!--dense", c.sparse, "threshold before each layer (SDSN) or not (DSN)");
  app->add_option("--window", c.window, "samples per noise-estimation window")->check(CLI::Range(2, 1 << 30));
  app->add_option("--estimator", c.estimator, "noise estimator")->check(CLI::IsMember({"mad", "std"}));
  app->add_flag("--compat-pseudocode", c.compat_pseudocode, "use sigma * sum |gd|^2 for the selected risk");
  app->add_option("--seed", c.seed, "seed for randomized checks");
  if (with_out) app->add_option("--out", c.out, "output path prefix");
}

sdsn::RunConfig resolve(const Common& c) {
  sdsn::RunConfig cfg = c.config_path.empty() ? sdsn::RunConfig{} : sdsn::load_config(c.config_path);
  if (c.sparse) cfg.sparse = *c.sparse;
  if (c.window) sdsn::set_config_value(cfg, "window", std::to_string(*c.window));
  if (c.estimator) sdsn::set_config_value(cfg, "estimator", *c.estimator);
  if (c.compat_pseudocode) cfg.risk_mode = sdsn::RiskMode::Pseudocode;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-based sparse thresholding for wavelet frames and scattering features"};
  app.require_subcommand(1);
  Common common;
  std::string input;
  std::vector<std::string> inputs;

  auto* scalogram = app.add_subcommand("scalogram", "export the layer-1 scalogram modulus (CSV + FCM1)");
  add_common(scalogram, common, true);
  scalogram->add_option("input", input, "PCM WAV file")->required();

  auto* denoise = app.add_subcommand("denoise", "threshold the layer-1 scalogram and report sparsity");
  add_common(denoise, common, true);
  denoise->add_option("input", input, "PCM WAV file")->required();

  auto* scatter = app.add_subcommand("scatter", "two-layer scattering features, one row per input");
  add_common(scatter, common, true);
  scatter->add_option("inputs", inputs, "PCM WAV files")->required();

  auto* filters = app.add_subcommand("filters", "export the layer-1 filter bank");
  add_common(filters, common, true);

  auto* selfcheck = app.add_subcommand("selfcheck", "exact risk identities, pseudoinverse and dominance checks");
  add_common(selfcheck, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sdsn::kExitOk : sdsn::kExitUsage;
  }

  try {
    const sdsn::RunConfig cfg = resolve(common);
    if (*scalogram) {
      sdsn::cmd_scalogram(input, cfg, common.out, std::cout);
    } else if (*denoise) {
      sdsn::cmd_denoise(input, cfg, common.out, std::cout);
    } else if (*scatter) {
      const sdsn::ScatterReport r = sdsn::cmd_scatter(inputs, cfg, common.out, std::cout);
      for (const std::string& f : r.failures) std::cerr << "error: " << f << "\n";
      return r.exit_code;
    } else if (*filters) {
      sdsn::cmd_filters(cfg, common.out, std::cout);
    } else if (*selfcheck) {
      for (const auto& row : sdsn::cmd_selfcheck(cfg, std::cout)) {
        if (row.status == "fail") return sdsn::kExitNumerical;
      }
    }
  } catch (const sdsn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sdsn::exit_code_for(e);
  }
  return sdsn::kExitOk;
}
