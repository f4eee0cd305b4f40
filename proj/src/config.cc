// Copyright 2026 The convbeam Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "convbeam/config.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "convbeam/error.h"

extern char **environ;

namespace convbeam {

namespace {

std::string Key(const std::string &section, const std::string &key) {
  return section + "." + key;
}

double ParseDouble(const std::string &name, const std::string &value) {
  double out = 0.0;
  const char *end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ParseError(name + ": expected a finite number, got '" + value + "'");
  return out;
}

std::size_t ParseCount(const std::string &name, const std::string &value) {
  std::size_t out = 0;
  const char *end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ParseError(name + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

bool ParseBool(const std::string &name, const std::string &value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError(name + ": expected true or false, got '" + value + "'");
}

[[noreturn]] void BadChoice(const std::string &name, const std::string &value,
                            const std::string &choices) {
  throw ParseError(name + ": '" + value + "' is not one of " + choices);
}

void Set(EnhanceConfig &c, const std::string &section, const std::string &key,
         const std::string &value) {
  const std::string name = Key(section, key);
  if (section == "wpe") {
    if (key == "enabled") return void(c.wpe_enabled = ParseBool(name, value));
    if (key == "taps") return void(c.wpe.taps = ParseCount(name, value));
    if (key == "delay") return void(c.wpe.delay = ParseCount(name, value));
    if (key == "iterations") return void(c.wpe.iterations = ParseCount(name, value));
    if (key == "eps") return void(c.wpe.eps = ParseDouble(name, value));
    if (key == "xi") return void(c.wpe.xi = ParseDouble(name, value));
  } else if (section == "beamformer") {
    auto &b = c.beamformer;
    if (key == "variant") {
      if (value == "mvdr") return void(b.variant = BeamformerVariant::kMvdr);
      if (value == "wmpdr") return void(b.variant = BeamformerVariant::kWmpdr);
      BadChoice(name, value, "mvdr, wmpdr");
    }
    if (key == "formula") {
      if (value == "with_sv") return void(b.formula = FilterFormula::kWithSv);
      if (value == "without_sv") return void(b.formula = FilterFormula::kWithoutSv);
      BadChoice(name, value, "with_sv, without_sv");
    }
    if (key == "ref_channel") return void(b.ref_channel = ParseCount(name, value));
    if (key == "ref_mode") {
      if (value == "fixed_onehot") return void(b.ref_mode = RefMode::kFixedOneHot);
      BadChoice(name, value, "fixed_onehot");
    }
    if (key == "eps") return void(b.eps = ParseDouble(name, value));
    if (key == "sv_power_iters") {
      const std::size_t n = ParseCount(name, value);
      if (n > static_cast<std::size_t>(std::numeric_limits<int>::max()))
        throw ParseError(name + ": too large");
      return void(b.sv_power_iters = static_cast<int>(n));
    }
  } else if (section == "mask") {
    if (key == "type") {
      if (value == "tf") return void(c.mask_type = MaskType::kTf);
      if (value == "vad") return void(c.mask_type = MaskType::kVad);
      BadChoice(name, value, "tf, vad");
    }
    if (key == "source") {
      if (value == "oracle") return void(c.mask_source = MaskSource::kOracle);
      if (value == "file") return void(c.mask_source = MaskSource::kFile);
      BadChoice(name, value, "oracle, file");
    }
    if (key == "path") return void(c.mask_path = value);
    if (key == "xi_bf") return void(c.xi_bf = ParseDouble(name, value));
  } else if (section == "stft") {
    if (key == "window_len") return void(c.stft.window_len = ParseCount(name, value));
    if (key == "shift") return void(c.stft.shift = ParseCount(name, value));
    if (key == "transform_len") return void(c.stft.fft_len = ParseCount(name, value));
  } else if (section == "io") {
    if (key == "channels_used") return void(c.channels_used = ParseCount(name, value));
    if (key == "output") return void(c.output = value);
  } else {
    throw ParseError("unknown config section [" + section + "]");
  }
  throw ParseError("unknown config key " + name);
}

}  // namespace

const char *VariantName(BeamformerVariant v) {
  return v == BeamformerVariant::kMvdr ? "mvdr" : "wmpdr";
}
const char *FormulaName(FilterFormula f) {
  return f == FilterFormula::kWithSv ? "with_sv" : "without_sv";
}
const char *MaskTypeName(MaskType t) { return t == MaskType::kTf ? "tf" : "vad"; }

void EnhanceConfig::Validate() const {
  wpe.Validate();
  stft.Validate();
  if (!(xi_bf >= 0.0 && xi_bf < 1.0)) throw ValidationError("mask.xi_bf must lie in [0, 1)");
  if (mask_source == MaskSource::kFile && mask_path.empty())
    throw ValidationError("mask.path is required when mask.source = file");
  if (beamformer.ref_channel < 1) throw ValidationError("beamformer.ref_channel must be >= 1");
  if (channels_used != 0 && beamformer.ref_channel > channels_used)
    throw ValidationError("beamformer.ref_channel exceeds io.channels_used");
  if (beamformer.sv_power_iters < 1) throw ValidationError("beamformer.sv_power_iters must be >= 1");
  if (!(beamformer.eps >= 0.0)) throw ValidationError("beamformer.eps must be >= 0");
  if (output.empty()) throw ValidationError("io.output must not be empty");
}

EnhanceConfig ParseEnhanceConfig(const std::string &text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  EnhanceConfig config;
  for (const auto &[section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ParseError("config: key '" + section + "' outside any section");
    for (const auto &[key, value] : body) Set(config, section, key, value.data());
  }
  return config;
}

std::string RenderEnhanceConfig(const EnhanceConfig &c) {
  std::string out;
  out += "[wpe]\n";
  out += fmt::format("enabled = {}\n", c.wpe_enabled);
  out += fmt::format("taps = {}\n", c.wpe.taps);
  out += fmt::format("delay = {}\n", c.wpe.delay);
  out += fmt::format("iterations = {}\n", c.wpe.iterations);
  out += fmt::format("eps = {}\n", c.wpe.eps);
  out += fmt::format("xi = {}\n", c.wpe.xi);
  out += "\n[beamformer]\n";
  out += fmt::format("variant = {}\n", VariantName(c.beamformer.variant));
  out += fmt::format("formula = {}\n", FormulaName(c.beamformer.formula));
  out += fmt::format("ref_channel = {}\n", c.beamformer.ref_channel);
  out += "ref_mode = fixed_onehot\n";
  out += fmt::format("eps = {}\n", c.beamformer.eps);
  out += fmt::format("sv_power_iters = {}\n", c.beamformer.sv_power_iters);
  out += "\n[mask]\n";
  out += fmt::format("type = {}\n", MaskTypeName(c.mask_type));
  out += fmt::format("source = {}\n", c.mask_source == MaskSource::kOracle ? "oracle" : "file");
  if (!c.mask_path.empty()) out += fmt::format("path = {}\n", c.mask_path);
  out += fmt::format("xi_bf = {}\n", c.xi_bf);
  out += "\n[stft]\n";
  out += fmt::format("window_len = {}\n", c.stft.window_len);
  out += fmt::format("shift = {}\n", c.stft.shift);
  out += fmt::format("transform_len = {}\n", c.stft.fft_len);
  out += "\n[io]\n";
  out += fmt::format("channels_used = {}\n", c.channels_used);
  out += fmt::format("output = {}\n", c.output);
  return out;
}

EnhanceConfig LoadEnhanceConfig(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return ParseEnhanceConfig(ss.str());
  } catch (Error &e) {
    e.set_stage("config " + path.string());
    throw;
  }
}

void ApplyEnvOverrides(EnhanceConfig &config, const std::map<std::string, std::string> &env) {
  static const std::string kPrefix = "CONVBEAM_";
  for (const auto &[name, value] : env) {
    if (name.rfind(kPrefix, 0) != 0) continue;
    std::string rest = name.substr(kPrefix.size());
    for (auto &ch : rest) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto split = rest.find('_');
    if (split == std::string::npos || split == 0 || split + 1 == rest.size())
      throw ParseError("environment variable " + name + " does not name a config key");
    try {
      Set(config, rest.substr(0, split), rest.substr(split + 1), value);
    } catch (Error &e) {
      e.set_stage("environment " + name);
      throw;
    }
  }
}

std::map<std::string, std::string> ConvbeamEnvironment() {
  std::map<std::string, std::string> out;
  for (char **e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string entry = *e;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    if (entry.rfind("CONVBEAM_", 0) == 0) out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

}  // namespace convbeam
