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

// Binaural loudness back end operating on the filterbank output: 25-ms
// temporal integration, inner-hair-cell pre-attenuation, absolute threshold
// and post gain, bandwidth-dependent gain, binaural inhibition, and a power
// law from internal loudness to sones.

#ifndef EARQ_LOUDNESS_H_
#define EARQ_LOUDNESS_H_

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "earq/periphery.h"
#include "earq/signal.h"

namespace earq {

// Trace value for silence, dB.
inline constexpr double kTraceFloorDb = -100.0;

struct LoudnessParams {
  double integration_tau_s = 0.025;
  // Resolution of the back end; the 25-ms integrator is oversampled well
  // beyond its bandwidth at 1 ms.
  double step_s = 0.001;
  // Linear dB-domain slope above threshold, per channel.
  ChannelArray post_gain = [] {
    ChannelArray g{};
    g.fill(1.0);
    return g;
  }();
  // w(B) = 1 + lambda * log2(max(B, 1)) with B the number of active channels.
  double bandwidth_lambda = 0.15;
  // Binaural inhibition strength. When unset, it is derived during
  // calibration so that diotic presentation is `diotic_advantage` times as
  // loud (in sones) as monaural presentation.
  std::optional<double> kappa;
  double diotic_advantage = 1.5;
  double inhibition_floor = 1e-9;
  FilterbankParams filterbank;
};

// Specific loudness in internal units: values[t][p] for time step t.
struct SpecificLoudness {
  double step_s = 0.001;
  std::vector<ChannelArray> values;

  double Total(size_t t) const;
};

struct LoudnessResult {
  double sones = 0.0;
  double internal = 0.0;
  size_t peak_index = 0;
  double peak_time_s = 0.0;
  SpecificLoudness left;
  SpecificLoudness right;
  SpecificLoudness binaural;
};

// Squared channel signal smoothed by a first-order low-pass with time
// constant `tau_s`, sampled every `decimation` samples, in dB (output-domain
// SPL). Silence maps to kTraceFloorDb.
std::vector<double> IntegrateChannel(std::span<const double> x, double fs,
                                     double tau_s, size_t decimation);

// Per-channel traces for one ear: traces[p][t].
std::vector<std::vector<double>> TemporalIntegrate(
    const EarChannels& ear, double fs, const LoudnessParams& params = {});

// Subtracts the IHC share of the loss from every channel's trace.
void PreAttenuate(std::vector<std::vector<double>>& traces,
                  const Audiogram& ag);

// Output-domain level of a normal threshold tone in each channel.
ChannelArray LoudnessThresholdsDb(const FilterbankParams& params = {});

// post_gain[p] * max(trace - threshold[p], 0), laid out as values[t][p].
SpecificLoudness ThresholdPostGain(
    const std::vector<std::vector<double>>& traces,
    const ChannelArray& thresholds_db, const ChannelArray& post_gain,
    double step_s);

double BandwidthWeight(double active_channels, double lambda);

// Scales each time step by the weight of its active bandwidth.
void ApplyBandwidthGain(SpecificLoudness& specific, double lambda);

// Rational inhibition between ears:
// L / (1 + kappa R / (L + delta)) + R / (1 + kappa L / (R + delta)).
double BinauralInhibit(double left, double right, double kappa, double delta);

SpecificLoudness BinauralSum(const SpecificLoudness& left,
                             const SpecificLoudness& right, double kappa,
                             double delta);

class LoudnessModel {
 public:
  // Calibrates the sone transform so that a diotic 500-ms 1-kHz tone at
  // 40 dB SPL yields 1 sone and loudness doubles from 60 to 70 dB SPL.
  explicit LoudnessModel(LoudnessParams params = {});

  LoudnessResult Evaluate(const StereoSignal& sig, const Audiogram& ag) const;
  double Sones(const StereoSignal& sig, const Audiogram& ag) const;
  double SonesFromInternal(double internal) const;

  const LoudnessParams& params() const { return params_; }
  double kappa() const { return kappa_; }
  double exponent() const { return exponent_; }
  double scale() const { return scale_; }

 private:
  LoudnessResult EvaluateWithKappa(const StereoSignal& sig, const Audiogram& ag,
                                   double kappa) const;

  LoudnessParams params_;
  ChannelArray thresholds_db_{};
  double kappa_ = 1.0 / 3.0;
  double exponent_ = 1.0;
  double scale_ = 1.0;
};

class MatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds a stimulus at the requested level (dB SPL).
using StimulusGenerator = std::function<StereoSignal(double level_db_spl)>;

struct LevelBracket {
  double lo_db = -20.0;
  double hi_db = 120.0;
};

struct MatchOptions {
  LevelBracket bracket;
  double relative_tolerance = 1e-3;
  int max_iterations = 40;
};

// Bisection on probe level until the probe's loudness is within the relative
// tolerance of `target_sones`. Throws MatchError when the target is zero or
// the bracket does not enclose it.
double MatchLevel(const LoudnessModel& model, const StimulusGenerator& probe,
                  double target_sones, const Audiogram& ag,
                  const MatchOptions& options = {});

double MatchLevel(const LoudnessModel& model, const StimulusGenerator& probe,
                  const StereoSignal& reference, const Audiogram& ag,
                  const MatchOptions& options = {});

// Lowest probe level with non-zero loudness, to `tolerance_db`.
double DetectionThreshold(const LoudnessModel& model,
                          const StimulusGenerator& probe, const Audiogram& ag,
                          LevelBracket bracket = {},
                          double tolerance_db = 0.01);

// Generator scaling a fixed waveform; `unit` must be calibrated to
// `unit_level_db`.
StimulusGenerator ScaledStimulus(StereoSignal unit, double unit_level_db);

}  // namespace earq

#endif  // EARQ_LOUDNESS_H_
