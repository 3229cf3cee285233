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

// Monaural and binaural quality features computed from the peripheral
// representation of a reference and a test signal.
//
// Monaural path: per 400-ms frame and channel, envelope-power increments and
// decrements of the test relative to the reference are expressed as SNRs,
// averaged over frames in dB, averaged over the two cases, pooled across
// channels and mapped to a bounded sensitivity index d'_mon. The better ear
// determines the monaural quality.
//
// Binaural path: the complex interaural correlation (fine structure below
// 1.3 kHz, envelope above) and the interaural level difference are compared
// between reference and test, giving d'_gamma and d'_ild, which combine as
//   d'_bin = sqrt(d'_gamma^2 + alpha * d'_ild^2),  alpha = 1/13.
//
// Both indices are normalized to [0, 1] quality scores; the lower one is the
// overall quality.

#ifndef EARQ_QUALITY_H_
#define EARQ_QUALITY_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "earq/fft.h"
#include "earq/periphery.h"
#include "earq/signal.h"

namespace earq {

inline constexpr double kFrameSeconds = 0.400;
inline constexpr double kMinFrameSeconds = 0.200;
inline constexpr double kIldWeight = 1.0 / 13.0;

struct QualityParams {
  // Per-frame SNR bounds in dB; identical envelopes sit at the ceiling.
  double snr_ceiling_db = 100.0;
  double snr_floor_db = -100.0;
  // The log transform gives d' = 0 at or above `upper`, d'_max at or below
  // `lower`, linear in dB between.
  double transform_upper_db = 60.0;
  double transform_lower_db = 0.0;
  double dprime_max_mon = 5.0;
  double dprime_max_bin = 5.0;
  double sigma_gamma = 0.25;
  double sigma_ild_db = 3.0;
  double ild_clamp_db = 30.0;
  double ild_weight = kIldWeight;
};

class QualityInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Consecutive, non-overlapping 400-ms frames. A trailing remainder of at
// least 200 ms extends the last frame (or forms the only frame for signals
// shorter than 400 ms); a shorter remainder is dropped.
struct FrameGrid {
  struct Frame {
    size_t begin = 0;
    size_t end = 0;
  };
  size_t frame_length = 0;
  std::vector<Frame> frames;

  size_t size() const { return frames.size(); }
  friend bool operator==(const FrameGrid&, const FrameGrid&) = default;
};

// Throws QualityInputError when the signal is shorter than 200 ms.
FrameGrid MakeFrameGrid(size_t num_samples, double fs);

struct ChannelSnr {
  double incr_db = 0.0;
  double decr_db = 0.0;
};

// Increment/decrement SNRs of one channel, averaged across frames in dB.
ChannelSnr ColorationSnr(std::span<const double> env_ref,
                         std::span<const double> env_test,
                         const FrameGrid& grid,
                         const QualityParams& params = {});

std::vector<ChannelSnr> ColorationSnrs(
    const std::vector<std::vector<double>>& env_ref,
    const std::vector<std::vector<double>>& env_test, const FrameGrid& grid,
    const QualityParams& params = {});

// Pooled monaural SNR in dB: the per-channel mean of the increment and
// decrement SNRs, combined as the root-sum-square of inverse linear SNRs.
double MonauralSnrDb(std::span<const ChannelSnr> snrs);

// Bounded log transform of the pooled SNR.
double DprimeMon(std::span<const ChannelSnr> snrs,
                 const QualityParams& params = {});

// Per-frame complex correlation mean(l conj(r)) / sqrt(mean|l|^2 mean|r|^2);
// zero when either ear has no power in the frame.
std::vector<Complex> InterauralCoherence(std::span<const Complex> left,
                                         std::span<const Complex> right,
                                         const FrameGrid& grid);

// Per-frame 10 log10(P_left / P_right) of envelope power, clamped to
// +-ild_clamp_db; zero when both ears are silent.
std::vector<double> InterauralLevelDifference(std::span<const double> left_env,
                                              std::span<const double> right_env,
                                              const FrameGrid& grid,
                                              const QualityParams& params = {});

// Feature planes indexed [channel][frame].
struct BinauralFeatures {
  std::vector<std::vector<Complex>> gamma;
  std::vector<std::vector<double>> ild;
};

struct BinauralDprime {
  double gamma = 0.0;
  double ild = 0.0;
  double bin = 0.0;
};

// sqrt(d_gamma^2 + weight * d_ild^2).
double CombineBinaural(double dprime_gamma, double dprime_ild,
                       double ild_weight = kIldWeight);

// RMS over channels and frames of |feature difference| / sigma, then
// CombineBinaural. Throws QualityInputError for mismatched planes.
BinauralDprime DprimeBin(const BinauralFeatures& ref,
                         const BinauralFeatures& test,
                         const QualityParams& params = {});

struct QualityReport {
  double q_mon = 1.0;
  double q_bin = 1.0;
  double overall = 1.0;
  double dprime_mon = 0.0;
  double dprime_gamma = 0.0;
  double dprime_ild = 0.0;
  double dprime_bin = 0.0;
  // Diagnostics.
  double dprime_mon_left = 0.0;
  double dprime_mon_right = 0.0;
  double snr_mon_left_db = 0.0;
  double snr_mon_right_db = 0.0;
};

// q = 1 - min(d'/d'_max, 1) per path; overall = min(q_mon, q_bin).
QualityReport OverallQuality(double dprime_mon, double dprime_bin,
                             const QualityParams& params = {});

// Indices of the channels used for quality features (cf >= 315 Hz).
std::vector<size_t> QualityChannels();

// Interaural features of a peripheral representation on the given grid.
BinauralFeatures ExtractBinauralFeatures(const PeripheralRepresentation& rep,
                                         const FrameGrid& grid,
                                         const QualityParams& params = {});

// Full pipeline on time-aligned, equal-length signals of at least 200 ms.
QualityReport PredictQuality(const StereoSignal& ref, const StereoSignal& test,
                             const Audiogram& ag,
                             const QualityParams& params = {},
                             const FilterbankParams& filterbank = {});

}  // namespace earq

#endif  // EARQ_QUALITY_H_
