// Copyright 2026 The Earq Authors. All Rights Reserved.
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

// earq: quality and loudness predictions from the command line.
//
//   earq quality REF.wav TEST.wav [--audiogram F] [--out CSV] [--json JSON]
//   earq loudness IN.wav | --tone f,dur,spl [--audiogram F] [--monaural]
//   earq experiment loudness-function|elc|slsum|quality-ladder
//        [--audiogram F] [--out CSV] [--plot SVG] [--seed N] [--monaural]
//   earq distort IN.wav OUT.wav --kind K --param P [--seed N]
//
// Exit status: 0 on success, 1 on processing errors, 2 on bad usage.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "earq/distort.h"
#include "earq/experiments.h"
#include "earq/io.h"
#include "earq/loudness.h"
#include "earq/quality.h"
#include "earq/signal.h"
#include "earq/wav.h"

namespace {

using earq::FormatNumber;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct QualityArgs {
  std::string ref;
  std::string test;
  std::optional<std::string> audiogram;
  std::optional<std::string> out;
  std::optional<std::string> json;
};

struct LoudnessArgs {
  std::optional<std::string> input;
  std::vector<double> tone;
  std::optional<std::string> audiogram;
  std::optional<std::string> out;
  bool monaural = false;
  bool per_channel = false;
};

struct ExperimentArgs {
  std::string name;
  std::optional<std::string> audiogram;
  std::optional<std::string> out;
  std::optional<std::string> plot;
  uint64_t seed = 0;
  bool monaural = false;
};

struct DistortArgs {
  std::string input;
  std::string output;
  std::string kind;
  double param = 0.0;
  uint64_t seed = 0;
};

std::optional<std::filesystem::path> AsPath(
    const std::optional<std::string>& s) {
  if (!s.has_value()) return std::nullopt;
  return std::filesystem::path(*s);
}

int RunQuality(const QualityArgs& args) {
  const earq::Audiogram ag = earq::LoadAudiogram(AsPath(args.audiogram));
  const earq::StereoSignal ref = earq::LoadWav(args.ref);
  const earq::StereoSignal test = earq::LoadWav(args.test);
  const earq::QualityReport r = earq::PredictQuality(ref, test, ag);
  std::cout << "overall=" << FormatNumber(r.overall) << "\n"
            << "q_mon=" << FormatNumber(r.q_mon) << "\n"
            << "q_bin=" << FormatNumber(r.q_bin) << "\n"
            << "dprime_mon=" << FormatNumber(r.dprime_mon) << "\n"
            << "dprime_gamma=" << FormatNumber(r.dprime_gamma) << "\n"
            << "dprime_ild=" << FormatNumber(r.dprime_ild) << "\n"
            << "dprime_bin=" << FormatNumber(r.dprime_bin) << "\n";
  if (args.out) earq::WriteTextFile(*args.out, earq::QualityReportCsv(r));
  if (args.json) earq::WriteTextFile(*args.json, earq::QualityReportJson(r));
  return kExitOk;
}

int RunLoudness(const LoudnessArgs& args) {
  const earq::Audiogram ag = earq::LoadAudiogram(AsPath(args.audiogram));
  earq::StereoSignal sig =
      args.input ? earq::LoadWav(*args.input)
                 : earq::SynthTone(args.tone[0], args.tone[1], args.tone[2],
                                   earq::kModelSampleRate);
  if (args.monaural) sig = sig.LeftOnly();
  const earq::LoudnessModel model;
  const earq::LoudnessResult r = model.Evaluate(sig, ag);
  std::cout << "sones=" << FormatNumber(r.sones) << "\n"
            << "internal=" << FormatNumber(r.internal) << "\n"
            << "peak_time_s=" << FormatNumber(r.peak_time_s) << "\n";
  if (args.out) {
    earq::WriteTextFile(*args.out, earq::LoudnessResultCsv(r, args.per_channel));
  }
  return kExitOk;
}

int RunExperimentCommand(const ExperimentArgs& args) {
  earq::ExperimentSpec spec =
      earq::ExperimentSpec::Defaults(earq::ParseExperimentKind(args.name));
  spec.seed = args.seed;
  spec.monaural = args.monaural;
  const earq::Audiogram ag = earq::LoadAudiogram(AsPath(args.audiogram));
  const earq::LoudnessModel model;
  const earq::ExperimentOutput out = earq::RunExperiment(spec, model, ag);
  if (args.out) {
    earq::WriteTextFile(*args.out, out.csv);
  } else {
    std::cout << out.csv;
  }
  if (args.plot) earq::WriteTextFile(*args.plot, out.svg);
  return kExitOk;
}

int RunDistort(const DistortArgs& args) {
  const earq::DistortionKind kind = earq::ParseDistortionKind(args.kind);
  const earq::StereoSignal in = earq::LoadWav(args.input);
  earq::SaveWav(args.output, earq::Distort(in, kind, args.param, args.seed));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binaural quality and loudness model", "earq"};
  app.require_subcommand(1);

  QualityArgs quality;
  CLI::App* quality_cmd =
      app.add_subcommand("quality", "Predict quality of TEST against REF");
  quality_cmd->add_option("ref", quality.ref, "Reference WAV")->required();
  quality_cmd->add_option("test", quality.test, "Test WAV")->required();
  quality_cmd->add_option("--audiogram", quality.audiogram, "Audiogram JSON");
  quality_cmd->add_option("--out", quality.out, "Report CSV");
  quality_cmd->add_option("--json", quality.json, "Report JSON");

  LoudnessArgs loudness;
  CLI::App* loudness_cmd =
      app.add_subcommand("loudness", "Predict loudness in sones");
  CLI::Option* input_opt =
      loudness_cmd->add_option("input", loudness.input, "Input WAV");
  CLI::Option* tone_opt =
      loudness_cmd
          ->add_option("--tone", loudness.tone,
                       "Synthesized tone: freq_hz,duration_s,level_db_spl")
          ->delimiter(',')
          ->expected(3);
  input_opt->excludes(tone_opt);
  tone_opt->excludes(input_opt);
  loudness_cmd->add_option("--audiogram", loudness.audiogram, "Audiogram JSON");
  loudness_cmd->add_option("--out", loudness.out, "Result CSV");
  loudness_cmd->add_flag("--per-channel", loudness.per_channel,
                         "Append specific loudness to the CSV");
  loudness_cmd->add_flag("--monaural", loudness.monaural,
                         "Present the left ear only");

  ExperimentArgs experiment;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Run a loudness or quality experiment");
  experiment_cmd
      ->add_option("name", experiment.name,
                   "loudness-function, elc, slsum or quality-ladder")
      ->required()
      ->check(CLI::IsMember(
          {"loudness-function", "elc", "slsum", "quality-ladder", "quality"}));
  experiment_cmd->add_option("--audiogram", experiment.audiogram,
                             "Audiogram JSON");
  experiment_cmd->add_option("--out", experiment.out, "CSV (default stdout)");
  experiment_cmd->add_option("--plot", experiment.plot, "SVG chart");
  experiment_cmd->add_option("--seed", experiment.seed, "Random seed");
  experiment_cmd->add_flag("--monaural", experiment.monaural,
                           "Present stimuli to the left ear only");

  DistortArgs distort;
  CLI::App* distort_cmd =
      app.add_subcommand("distort", "Apply a synthetic distortion");
  distort_cmd->add_option("input", distort.input, "Input WAV")->required();
  distort_cmd->add_option("output", distort.output, "Output WAV")->required();
  distort_cmd->add_option("--kind", distort.kind, "tilt, noise, ild, decorrelate")
      ->required()
      ->check(CLI::IsMember({"tilt", "noise", "ild", "decorrelate"}));
  distort_cmd->add_option("--param", distort.param, "Distortion strength")
      ->required();
  distort_cmd->add_option("--seed", distort.seed, "Random seed");

  try {
    app.parse(argc, argv);
    if (loudness_cmd->parsed() && !loudness.input && loudness.tone.empty()) {
      throw CLI::RequiredError("loudness needs an input WAV or --tone");
    }
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (quality_cmd->parsed()) return RunQuality(quality);
    if (loudness_cmd->parsed()) return RunLoudness(loudness);
    if (experiment_cmd->parsed()) return RunExperimentCommand(experiment);
    if (distort_cmd->parsed()) return RunDistort(distort);
  } catch (const std::exception& e) {
    std::cerr << "earq: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
