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

// Loudness and quality experiment drivers. Each produces rows in a fixed
// order; the CSV and SVG renderers are pure functions of those rows.

#ifndef EARQ_EXPERIMENTS_H_
#define EARQ_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "earq/distort.h"
#include "earq/loudness.h"
#include "earq/periphery.h"
#include "earq/quality.h"

namespace earq {

enum class ExperimentKind { kLoudnessFunction, kElc, kSlsum, kQualityLadder };

// Accepts "loudness-function", "elc", "slsum" and "quality-ladder" (also
// "quality"). Throws std::invalid_argument otherwise.
ExperimentKind ParseExperimentKind(std::string_view name);
std::string ExperimentName(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kLoudnessFunction;

  // Loudness function: tone levels. ELC: phon levels. Summation: reference
  // levels. Quality ladder: presentation level (first entry).
  std::vector<double> levels_db;
  // ELC probe frequencies.
  std::vector<double> freqs_hz;
  // Summation probe bandwidths; the reference is `reference_bandwidth_hz`.
  std::vector<double> bandwidths_hz;

  double tone_hz = 1000.0;
  double duration_s = 0.5;
  double center_hz = 2000.0;
  double reference_bandwidth_hz = 3200.0;

  // Probe and reference are presented to the left ear only.
  bool monaural = false;
  uint64_t seed = 0;

  // Defaults for each kind.
  static ExperimentSpec Defaults(ExperimentKind kind);

  // Throws std::invalid_argument when a frequency or band edge reaches the
  // model Nyquist rate or a level lies outside [0, 110] dB SPL.
  void Validate() const;
};

// 12 log-spaced points from 100 Hz to 10 kHz.
std::vector<double> ElcGrid();

// Derives a per-stimulus seed so that a bandwidth shared between runs (and
// between reference and probe) yields the same noise token.
uint64_t StimulusSeed(uint64_t seed, double bandwidth_hz);

struct LoudnessFunctionRow {
  double level_db_spl;
  double sones;
};

struct ElcRow {
  double freq_hz;
  double phon;
  // Empty when the match failed.
  std::optional<double> level_db_spl;
};

struct SlsumRow {
  double bandwidth_hz;
  double ref_level_db_spl;
  std::optional<double> matched_level_db_spl;
};

struct LadderRow {
  DistortionKind kind;
  double param;
  QualityReport report;
};

std::vector<LoudnessFunctionRow> RunLoudnessFunction(
    const ExperimentSpec& spec, const LoudnessModel& model,
    const Audiogram& ag);

// Rows are ordered by phon, then frequency. The grid gains a 1-kHz point if it
// lacks one.
std::vector<ElcRow> RunElc(const ExperimentSpec& spec,
                           const LoudnessModel& model, const Audiogram& ag);

// Rows are ordered by reference level, then bandwidth.
std::vector<SlsumRow> RunSlsum(const ExperimentSpec& spec,
                               const LoudnessModel& model, const Audiogram& ag);

// Speech-shaped noise through each distortion at increasing strength.
std::vector<LadderRow> RunQualityLadder(const ExperimentSpec& spec,
                                        const Audiogram& ag);

std::string LoudnessFunctionCsv(const std::vector<LoudnessFunctionRow>& rows);
std::string ElcCsv(const std::vector<ElcRow>& rows);
std::string SlsumCsv(const std::vector<SlsumRow>& rows);
std::string LadderCsv(const std::vector<LadderRow>& rows);

std::string LoudnessFunctionSvg(const std::vector<LoudnessFunctionRow>& rows);
std::string ElcSvg(const std::vector<ElcRow>& rows);
std::string SlsumSvg(const std::vector<SlsumRow>& rows);
std::string LadderSvg(const std::vector<LadderRow>& rows);

struct ExperimentOutput {
  std::string csv;
  std::string svg;
};

// Validates, runs and renders.
ExperimentOutput RunExperiment(const ExperimentSpec& spec,
                               const LoudnessModel& model,
                               const Audiogram& ag);

}  // namespace earq

#endif  // EARQ_EXPERIMENTS_H_
