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

// Peripheral front end shared by the quality and loudness back ends: middle
// ear, a 23-channel level-dependent gammatone filterbank with outer-hair-cell
// loss, hearing-threshold gating, and envelope / fine-structure extraction.

#ifndef EARQ_PERIPHERY_H_
#define EARQ_PERIPHERY_H_

#include <array>
#include <cstddef>
#include <vector>

#include "earq/fft.h"
#include "earq/signal.h"

namespace earq {

inline constexpr size_t kNumChannels = 23;
inline constexpr double kLowestCenterHz = 80.0;
inline constexpr double kHighestCenterHz = 12500.0;

// Channels below this center frequency carry fine structure.
inline constexpr double kTfsCrossoverHz = 1300.0;
// Lowest center frequency used by the quality features.
inline constexpr double kQualityLowestHz = 315.0;

inline constexpr double kEnvelopeCutoffHz = 150.0;

// Outer-hair-cell share of the audiometric loss and its ceiling.
inline constexpr double kOhcShare = 0.8;
inline constexpr double kOhcCapDb = 50.0;

using ChannelArray = std::array<double, kNumChannels>;

// Glasberg & Moore ERB-number (Cams) and ERB bandwidth.
double ErbNumber(double hz);
double ErbNumberToHz(double erb_number);
double ErbBandwidthHz(double hz);

// 23 center frequencies equally spaced on the ERB-number scale from 80 Hz to
// 12.5 kHz.
const ChannelArray& ErbCenterFrequencies();

// Free-field absolute threshold (dB SPL) interpolated linearly in
// log-frequency from a third-octave table, clamped at the table edges.
double AbsoluteThresholdDbSpl(double hz);

struct HearingLossSplit {
  double ohc_db = 0.0;
  double ihc_db = 0.0;
};

// ohc = min(0.8 * total, 50 dB); ihc = total - ohc.
// Throws std::invalid_argument for negative or non-finite loss.
HearingLossSplit SplitHearingLoss(double hl_total_db);

struct Audiogram {
  // Audiometric description.
  std::vector<double> freqs_hz;
  std::vector<double> hl_db;
  std::vector<double> ohc_db;
  std::vector<double> ihc_db;

  // Values at the filterbank center frequencies.
  ChannelArray channel_total_db{};
  ChannelArray channel_ohc_db{};
  ChannelArray channel_ihc_db{};

  bool IsNormal() const;
};

// Splits each audiometric loss and interpolates to the channel center
// frequencies (linear in log-frequency, edge-clamped). Throws
// std::invalid_argument on negative loss, mismatched or empty lists, or
// non-increasing frequencies.
Audiogram SplitAudiogram(std::vector<double> freqs_hz,
                         std::vector<double> hl_db);

Audiogram NormalHearing();

// Magnitude response of the middle-ear filter, 0 dB at 1 kHz.
double MiddleEarGainDb(double hz, double fs = kModelSampleRate);

// Second-order high-pass at 350 Hz cascaded with a second-order low-pass at
// 6 kHz, normalized to unity gain at 1 kHz.
StereoSignal MiddleEar(const StereoSignal& sig);

struct FilterbankParams {
  // Compressive slope between the knees, in dB/dB.
  double compression = 0.25;
  double knee_low_db = 30.0;
  double knee_high_db = 100.0;
  // Maximum cochlear gain: (1 - c) * 70 dB for c = 0.25.
  double max_gain_db = 52.5;
  // Bandwidth multiplier is 1 + ohc_broadening * hl_ohc / cap plus up to
  // level_broadening at knee_high_db.
  double ohc_broadening = 2.0;
  double level_broadening = 1.0;
  double control_tau_s = 0.010;
  double block_s = 0.001;
};

// Cochlear gain at in-channel control level `level_db`. Normal hearing follows
// max_gain below the low knee and loses (1 - c) dB per dB up to the high knee;
// OHC loss caps the gain at max_gain * (1 - ohc_db / kOhcCapDb).
double CochlearGainDb(double level_db, double ohc_db,
                      const FilterbankParams& params = {});

// In-channel output level for a tone at the channel's center frequency.
inline double CochlearOutputDb(double level_db, double ohc_db,
                               const FilterbankParams& params = {}) {
  return level_db + CochlearGainDb(level_db, ohc_db, params);
}

double BandwidthFactor(double level_db, double ohc_db,
                       const FilterbankParams& params = {});

// In-channel level (dB SPL, after the middle ear) of a tone at the channel's
// center frequency presented at the normal absolute threshold.
double NormalChannelThresholdDb(size_t channel);

struct EarChannels {
  // output[p][i]: channel p at sample i.
  std::vector<std::vector<double>> output;
  // control_db[p][b]: smoothed in-channel level of block b, dB SPL.
  std::vector<std::vector<double>> control_db;
};

struct ChannelBank {
  ChannelArray center_hz{};
  double fs = kModelSampleRate;
  size_t block_size = 1;
  std::array<EarChannels, 2> ears;

  size_t size() const {
    return ears[0].output.empty() ? 0 : ears[0].output[0].size();
  }
};

// Level-dependent 4th-order gammatone filterbank. Each channel's gain and
// bandwidth follow the smoothed level of a fixed-bandwidth reference filter
// and the channel's OHC loss. `sig` is expected at the model rate and already
// middle-ear filtered.
ChannelBank Analyze(const StereoSignal& sig, const Audiogram& ag,
                    const FilterbankParams& params = {});

// Zeroes every block whose control level is below the normal threshold plus
// the audiometric loss of the channel.
ChannelBank ApplyThreshold(const ChannelBank& bank, const Audiogram& ag);

struct EarRepresentation {
  std::vector<std::vector<double>> env;
  // Analytic band signal for channels below kTfsCrossoverHz, empty above.
  std::vector<std::vector<Complex>> tfs;
};

struct PeripheralRepresentation {
  ChannelArray center_hz{};
  double fs = kModelSampleRate;
  std::array<EarRepresentation, 2> ears;

  bool HasTfs(size_t channel) const {
    return center_hz[channel] < kTfsCrossoverHz;
  }
};

// Hilbert envelope smoothed by a first-order 150-Hz low-pass; the analytic
// band signal is kept for the fine-structure channels.
PeripheralRepresentation ExtractEnvTfs(const ChannelBank& bank);

// Resampling, middle ear and filterbank.
ChannelBank RunPeriphery(const StereoSignal& sig, const Audiogram& ag,
                         const FilterbankParams& params = {});

}  // namespace earq

#endif  // EARQ_PERIPHERY_H_
