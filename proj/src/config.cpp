// SPDX-License-Identifier: Apache-2.0
#include "sdsn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sdsn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw InvalidParameter("config: invalid value '" + value + "' for key '" + key + "'");
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v);
}

template <typename E>
E pick(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, e] : options) {
    if (v == name) return e;
  }
  bad_value(key, v);
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "family") {
    c.family = pick<Family>(key, v, {{"gammatone", Family::Gammatone}, {"morlet", Family::Morlet}});
  } else if (key == "J1") {
    c.J1 = to_int(key, v);
  } else if (key == "Q1") {
    c.Q1 = to_int(key, v);
  } else if (key == "J2") {
    c.J2 = to_int(key, v);
  } else if (key == "Q2") {
    c.Q2 = to_int(key, v);
  } else if (key == "gammatone_order") {
    c.gammatone_order = to_int(key, v);
  } else if (key == "gammatone_r") {
    c.gammatone_r = to_double(key, v);
  } else if (key == "morlet_omega0") {
    c.morlet_omega0 = to_double(key, v);
  } else if (key == "morlet_dt") {
    c.morlet_dt = to_double(key, v);
  } else if (key == "normalization") {
    c.normalization = pick<Normalization>(
        key, v, {{"energy", Normalization::Energy}, {"amplitude", Normalization::Amplitude}});
  } else if (key == "window") {
    c.window = to_int(key, v);
  } else if (key == "estimator") {
    c.estimator = pick<Estimator>(key, v, {{"mad", Estimator::Mad}, {"std", Estimator::StdLiteral}});
  } else if (key == "noise_component") {
    c.noise_component =
        pick<NoiseComponent>(key, v, {{"real", NoiseComponent::Real}, {"modulus", NoiseComponent::Modulus}});
  } else if (key == "risk_mode") {
    c.risk_mode = pick<RiskMode>(key, v, {{"bound", RiskMode::Bound}, {"pseudocode", RiskMode::Pseudocode}});
  } else if (key == "signal_units") {
    c.signal_units = to_bool(key, v);
  } else if (key == "sigma") {
    if (v == "auto") {
      c.sigma.reset();
    } else {
      c.sigma = to_double(key, v);
    }
  } else if (key == "sparse") {
    c.sparse = to_bool(key, v);
  } else if (key == "decimation1") {
    c.decimation1 = to_int(key, v);
  } else if (key == "decimation2") {
    c.decimation2 = to_int(key, v);
  } else if (key == "pooling") {
    c.pooling = pick<Pooling>(key, v, {{"mean", Pooling::Mean}, {"time", Pooling::KeepTime}});
  } else if (key == "zero_tol") {
    c.zero_tol = to_double(key, v);
  } else if (key == "seed") {
    c.seed = to_u64(key, v);
  } else {
    throw InvalidParameter("config: unknown key '" + key + "'");
  }

  if (c.window < 2) throw InvalidParameter("config: window must be >= 2");
  if (c.decimation1 < 0 || c.decimation2 < 0) throw InvalidParameter("config: decimation must be >= 0");
  if (c.zero_tol < 0.0) throw InvalidParameter("config: zero_tol must be >= 0");
  if (c.sigma && *c.sigma < 0.0) throw InvalidParameter("config: sigma must be >= 0");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidParameter(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameter("config: JSON form must be an object");
    for (const auto& [key, value] : j.items()) {
      set_config_value(cfg, key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    return cfg;
  }

  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config: line " + std::to_string(lineno) + " is not key = value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["family"] = family_name(c.family);
  j["J1"] = c.J1;
  j["Q1"] = c.Q1;
  j["J2"] = c.J2;
  j["Q2"] = c.Q2;
  j["gammatone_order"] = c.gammatone_order;
  j["gammatone_r"] = c.gammatone_r;
  j["morlet_omega0"] = c.morlet_omega0;
  j["morlet_dt"] = c.morlet_dt;
  j["normalization"] = normalization_name(c.normalization);
  j["window"] = c.window;
  j["estimator"] = c.estimator == Estimator::Mad ? "mad" : "std";
  j["noise_component"] = c.noise_component == NoiseComponent::Real ? "real" : "modulus";
  j["risk_mode"] = risk_mode_name(c.risk_mode);
  j["signal_units"] = c.signal_units;
  if (c.sigma) {
    j["sigma"] = *c.sigma;
  } else {
    j["sigma"] = "auto";
  }
  j["sparse"] = c.sparse;
  j["decimation1"] = c.decimation1;
  j["decimation2"] = c.decimation2;
  j["pooling"] = c.pooling == Pooling::Mean ? "mean" : "time";
  j["zero_tol"] = c.zero_tol;
  j["seed"] = c.seed;
  return j.dump(2);
}

WaveletSpec wavelet_spec(const RunConfig& c) {
  WaveletSpec w;
  w.family = c.family;
  w.morlet.omega0 = c.morlet_omega0;
  w.morlet.dt = c.morlet_dt;
  w.gammatone_order = c.gammatone_order;
  w.gammatone_r = c.gammatone_r;
  w.normalization = c.normalization;
  return w;
}

NoiseConfig noise_config(const RunConfig& c) {
  NoiseConfig n;
  n.estimator = c.estimator;
  n.component = c.noise_component;
  n.signal_units = c.signal_units;
  n.fixed_sigma = c.sigma;
  n.mode = c.risk_mode;
  return n;
}

ScatteringConfig scattering_config(const RunConfig& c) {
  ScatteringConfig s;
  const WaveletSpec w = wavelet_spec(c);
  s.layer1 = LayerSpec{c.J1, c.Q1, w, c.decimation1 > 0 ? std::optional<int>(c.decimation1) : std::nullopt};
  s.layer2 = LayerSpec{c.J2, c.Q2, w, c.decimation2 > 0 ? std::optional<int>(c.decimation2) : std::nullopt};
  s.window = c.window;
  s.sparse = c.sparse;
  s.noise = noise_config(c);
  s.pooling = c.pooling;
  return s;
}

}  // namespace sdsn
