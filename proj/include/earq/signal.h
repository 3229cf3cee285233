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

#ifndef EARQ_SIGNAL_H_
#define EARQ_SIGNAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace earq {

// Digital RMS 1.0 corresponds to this sound pressure level. Every dB SPL value
// in the library is defined through this constant.
inline constexpr double kCalibrationDbSpl = 100.0;

// All model stages run at this rate; inputs are resampled on ingestion.
inline constexpr double kModelSampleRate = 44100.0;

// Raised-cosine on/off ramp applied to synthesized stimuli.
inline constexpr double kRampSeconds = 0.020;

// Converts between digital RMS and dB SPL under the calibration convention.
double RmsToDbSpl(double rms);
double DbSplToRms(double db_spl);

// Calibrated two-channel waveform. Both ears always hold the same, non-zero
// number of finite samples.
class StereoSignal {
 public:
  // Throws std::invalid_argument when the invariants do not hold.
  StereoSignal(std::vector<double> left, std::vector<double> right, double fs);

  // Diotic signal: the same samples in both ears.
  static StereoSignal Diotic(std::vector<double> samples, double fs);

  const std::vector<double>& left() const { return left_; }
  const std::vector<double>& right() const { return right_; }
  const std::vector<double>& ear(int index) const {
    return index == 0 ? left_ : right_;
  }
  double fs() const { return fs_; }
  size_t size() const { return left_.size(); }
  double duration() const { return static_cast<double>(size()) / fs_; }

  bool IsDiotic() const { return left_ == right_; }

  // Multiplies both ears by `gain` (linear).
  StereoSignal Scaled(double gain) const;
  // Returns the signal with left and right exchanged.
  StereoSignal Swapped() const;
  // Replaces the right ear by silence.
  StereoSignal LeftOnly() const;

  friend bool operator==(const StereoSignal&, const StereoSignal&) = default;

 private:
  std::vector<double> left_;
  std::vector<double> right_;
  double fs_;
};

double Rms(std::span<const double> samples);

// RMS over [begin, end) of `samples`.
double Rms(std::span<const double> samples, size_t begin, size_t end);

// Number of samples covered by each on/off ramp for a stimulus of `n`
// samples at rate `fs`.
size_t RampSamples(size_t n, double fs);

// Applies raised-cosine on/off ramps of kRampSeconds in place.
void ApplyRamps(std::span<double> samples, double fs);

// Diotic sinusoid at `level_db_spl`, measured over the ramp-free part.
// Throws std::invalid_argument unless 0 < freq < fs/2 and dur > 0.
StereoSignal SynthTone(double freq_hz, double dur_s, double level_db_spl,
                       double fs);

// Edges of a noise band geometrically centered at `center_hz`:
// lo * hi == center^2 and hi - lo == bandwidth.
std::pair<double, double> NoiseBandEdges(double center_hz,
                                         double bandwidth_hz);

// Diotic Gaussian noise band obtained by zeroing FFT bins of white noise
// outside the band edges. Deterministic for a given seed.
StereoSignal SynthNoiseBand(double center_hz, double bandwidth_hz, double dur_s,
                            double level_db_spl, double fs, uint64_t seed);

// Diotic Gaussian noise with a long-term speech-like spectrum: high-passed at
// 100 Hz and falling 6 dB/octave above 500 Hz.
StereoSignal SynthSpeechShapedNoise(double dur_s, double level_db_spl,
                                    double fs, uint64_t seed);

// Band-limited (FFT) resampling. Returns the input unchanged when the rates
// already agree.
StereoSignal Resample(const StereoSignal& sig, double fs_target);

// Resamples to kModelSampleRate if needed.
StereoSignal ToModelRate(const StereoSignal& sig);

}  // namespace earq

#endif  // EARQ_SIGNAL_H_
