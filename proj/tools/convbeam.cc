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

// convbeam: simulate scenes, enhance mixtures, score the results.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convbeam/commands.h"
#include "convbeam/config.h"
#include "convbeam/error.h"

using namespace convbeam;

namespace {

EnhanceConfig LoadConfig(const std::string &path) {
  EnhanceConfig config = path.empty() ? EnhanceConfig{} : LoadEnhanceConfig(path);
  ApplyEnvOverrides(config, ConvbeamEnvironment());
  config.Validate();
  return config;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Mask-based dereverberation and beamforming for multi-speaker mixtures"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "Config file (scene manifest for simulate)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  app.add_flag("--verbose", verbose, "Print progress and stage timings to stderr");

  auto *simulate = app.add_subcommand("simulate", "Render a scene from a manifest and mono sources");
  std::vector<std::string> sources;
  bool pcm16 = false;
  simulate->add_option("sources", sources, "Mono source WAVs, one per speaker")->required();
  simulate->add_flag("--pcm16", pcm16, "Write 16-bit PCM instead of 32-bit float");

  auto *enhance = app.add_subcommand("enhance", "Dereverberate and separate a mixture");
  std::string mixture, truth_dir;
  enhance->add_option("mixture", mixture, "Multichannel mixture WAV")->required();
  enhance->add_option("--truth", truth_dir, "Scene directory for oracle masks");

  auto *evaluate = app.add_subcommand("evaluate", "Score enhanced signals against a scene");
  std::vector<std::string> enhanced;
  std::string eval_truth;
  evaluate->add_option("enhanced", enhanced, "Enhanced mono WAVs, one per speaker")->required();
  evaluate->add_option("--truth", eval_truth, "Scene directory")->required();

  auto *demo = app.add_subcommand("demo", "Simulate, run the 8-cell variant grid and score it");
  double seconds = 10.0;
  std::size_t channels = 6;
  demo->add_option("--seconds", seconds, "Scene length")->check(CLI::PositiveNumber);
  demo->add_option("--channels", channels, "Microphone count")->check(CLI::IsMember({2, 6}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  std::ostream *log = verbose ? &std::cerr : nullptr;
  try {
    if (out_dir.empty()) throw ValidationError("--out is required");

    if (simulate->parsed()) {
      if (config_path.empty()) throw ValidationError("simulate: --config must name a scene manifest");
      SimulateOptions o;
      o.scene = config_path;
      for (const auto &s : sources) o.sources.emplace_back(s);
      o.out_dir = out_dir;
      o.seed = seed;
      o.format = pcm16 ? WavFormat::kPcm16 : WavFormat::kFloat32;
      RunSimulate(o, log);
    } else if (enhance->parsed()) {
      EnhanceOptions o;
      o.config = LoadConfig(config_path);
      o.mixture = mixture;
      o.truth_dir = truth_dir;
      o.out_dir = out_dir;
      o.seed = seed.value_or(0);
      if (!config_path.empty()) o.extra_inputs.emplace_back(config_path);
      RunEnhance(o, log);
    } else if (evaluate->parsed()) {
      const EnhanceConfig config = LoadConfig(config_path);
      EvaluateOptions o;
      for (const auto &e : enhanced) o.enhanced.emplace_back(e);
      o.truth_dir = eval_truth;
      o.out_dir = out_dir;
      o.ref_channel = config.beamformer.ref_channel;
      o.edge = config.stft.window_len;
      const ScoreReport report = RunEvaluate(o);
      if (verbose) std::cerr << FormatReportTable(report);
    } else if (demo->parsed()) {
      DemoOptions o;
      o.out_dir = out_dir;
      o.seed = seed.value_or(1);
      o.channels = channels;
      o.seconds = seconds;
      o.base = LoadConfig(config_path);
      const auto rows = RunDemo(o, log);
      std::cout << FormatDemoTable(rows);
    }
  } catch (const Error &e) {
    std::cerr << "convbeam: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "convbeam: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
