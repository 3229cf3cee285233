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

#include "earq/signal.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "earq/fft.h"

namespace earq {

double RmsToDbSpl(double rms) {
  return kCalibrationDbSpl + 20.0 * std::log10(rms);
}

double DbSplToRms(double db_spl) {
  return std::pow(10.0, (db_spl - kCalibrationDbSpl) / 20.0);
}

StereoSignal::StereoSignal(std::vector<double> left, std::vector<double> right,
                           double fs)
    : left_(std::move(left)), right_(std::move(right)), fs_(fs) {
  if (left_.empty() || left_.size() != right_.size()) {
    throw std::invalid_argument(
        "StereoSignal: ears must hold the same, non-zero number of samples");
  }
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) {
    throw std::invalid_argument("StereoSignal: sample rate must be positive");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(left_.begin(), left_.end(), finite) ||
      !std::all_of(right_.begin(), right_.end(), finite)) {
    throw std::invalid_argument("StereoSignal: non-finite sample");
  }
}

StereoSignal StereoSignal::Diotic(std::vector<double> samples, double fs) {
  std::vector<double> copy = samples;
  return StereoSignal(std::move(samples), std::move(copy), fs);
}

StereoSignal StereoSignal::Scaled(double gain) const {
  std::vector<double> l = left_;
  std::vector<double> r = right_;
  for (double& v : l) v *= gain;
  for (double& v : r) v *= gain;
  return StereoSignal(std::move(l), std::move(r), fs_);
}

StereoSignal StereoSignal::Swapped() const {
  return StereoSignal(right_, left_, fs_);
}

StereoSignal StereoSignal::LeftOnly() const {
  return StereoSignal(left_, std::vector<double>(left_.size(), 0.0), fs_);
}

double Rms(std::span<const double> samples) {
  return Rms(samples, 0, samples.size());
}

double Rms(std::span<const double> samples, size_t begin, size_t end) {
  end = std::min(end, samples.size());
  if (begin >= end) return 0.0;
  double sum = 0.0;
  for (size_t i = begin; i < end; ++i) sum += samples[i] * samples[i];
  return std::sqrt(sum / static_cast<double>(end - begin));
}

size_t RampSamples(size_t n, double fs) {
  const auto ramp = static_cast<size_t>(std::lround(kRampSeconds * fs));
  return std::min(ramp, n / 2);
}

void ApplyRamps(std::span<double> samples, double fs) {
  const size_t n = samples.size();
  const size_t ramp = RampSamples(n, fs);
  for (size_t i = 0; i < ramp; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                             static_cast<double>(ramp));
    samples[i] *= w;
    samples[n - 1 - i] *= w;
  }
}

namespace {

size_t SampleCount(double dur_s, double fs) {
  if (!(dur_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(fs > 0.0)) throw std::invalid_argument("sample rate must be positive");
  const auto n = static_cast<size_t>(std::lround(dur_s * fs));
  if (n == 0) throw std::invalid_argument("duration shorter than one sample");
  return n;
}

// Scales `samples` so that the RMS over the ramp-free part hits the level.
void SetSteadyLevel(std::vector<double>& samples, double fs,
                    double level_db_spl) {
  const size_t ramp = RampSamples(samples.size(), fs);
  double rms = Rms(samples, ramp, samples.size() - ramp);
  if (rms == 0.0) rms = Rms(samples);
  if (rms == 0.0) return;
  const double gain = DbSplToRms(level_db_spl) / rms;
  for (double& v : samples) v *= gain;
}

}  // namespace

StereoSignal SynthTone(double freq_hz, double dur_s, double level_db_spl,
                       double fs) {
  if (!(freq_hz > 0.0) || !(freq_hz < fs / 2.0)) {
    throw std::invalid_argument("SynthTone: frequency " +
                                std::to_string(freq_hz) +
                                " Hz outside (0, fs/2)");
  }
  const size_t n = SampleCount(dur_s, fs);
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / fs;
  for (size_t i = 0; i < n; ++i) x[i] = std::sin(w * static_cast<double>(i));
  // The steady-state sinusoid has RMS 1/sqrt(2) regardless of the cycle count.
  const double gain = std::numbers::sqrt2 * DbSplToRms(level_db_spl);
  for (double& v : x) v *= gain;
  ApplyRamps(x, fs);
  return StereoSignal::Diotic(std::move(x), fs);
}

std::pair<double, double> NoiseBandEdges(double center_hz,
                                         double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("noise band: bandwidth must be positive");
  }
  if (!(center_hz > 0.0)) {
    throw std::invalid_argument("noise band: center must be positive");
  }
  // Positive root of lo^2 + bw*lo - center^2 = 0.
  const double lo = 0.5 * (std::sqrt(bandwidth_hz * bandwidth_hz +
                                     4.0 * center_hz * center_hz) -
                           bandwidth_hz);
  return {lo, lo + bandwidth_hz};
}

StereoSignal SynthNoiseBand(double center_hz, double bandwidth_hz, double dur_s,
                            double level_db_spl, double fs, uint64_t seed) {
  const auto [lo, hi] = NoiseBandEdges(center_hz, bandwidth_hz);
  if (!(hi < fs / 2.0)) {
    throw std::invalid_argument("noise band: upper edge " + std::to_string(hi) +
                                " Hz exceeds Nyquist");
  }
  const size_t n = SampleCount(dur_s, fs);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = gauss(rng);

  std::vector<Complex> spectrum = RealFft(white);
  const double df = fs / static_cast<double>(n);
  for (size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < lo || f > hi) spectrum[k] = 0.0;
  }
  std::vector<double> x = InverseRealFft(spectrum, n);
  ApplyRamps(x, fs);
  SetSteadyLevel(x, fs, level_db_spl);
  return StereoSignal::Diotic(std::move(x), fs);
}

StereoSignal SynthSpeechShapedNoise(double dur_s, double level_db_spl,
                                    double fs, uint64_t seed) {
  const size_t n = SampleCount(dur_s, fs);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = gauss(rng);
  std::vector<Complex> spectrum = RealFft(white);
  const double df = fs / static_cast<double>(n);
  for (size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    const double hp = f < 100.0 ? 0.0 : 1.0;
    spectrum[k] *= hp / std::sqrt(1.0 + (f / 500.0) * (f / 500.0));
  }
  std::vector<double> x = InverseRealFft(spectrum, n);
  ApplyRamps(x, fs);
  SetSteadyLevel(x, fs, level_db_spl);
  return StereoSignal::Diotic(std::move(x), fs);
}

namespace {

std::vector<double> ResampleChannel(const std::vector<double>& x, size_t m) {
  const size_t n = x.size();
  const std::vector<Complex> in = RealFft(x);
  std::vector<Complex> out(m / 2 + 1);
  const size_t copy = std::min(in.size(), out.size());
  for (size_t k = 0; k < copy; ++k) out[k] = in[k];
  // An even-length Nyquist bin has no conjugate partner; drop it whenever it
  // would be reinterpreted by the other length.
  if (m < n && m % 2 == 0) out[m / 2] = 0.0;
  if (n < m && n % 2 == 0 && n / 2 < out.size()) out[n / 2] = 0.0;
  std::vector<double> y = InverseRealFft(out, m);
  // InverseRealFft normalizes by 1/m; amplitude needs 1/n.
  const double scale = static_cast<double>(m) / static_cast<double>(n);
  for (double& v : y) v *= scale;
  return y;
}

}  // namespace

StereoSignal Resample(const StereoSignal& sig, double fs_target) {
  if (!(fs_target > 0.0)) {
    throw std::invalid_argument("Resample: target rate must be positive");
  }
  if (fs_target == sig.fs()) return sig;
  const auto m = static_cast<size_t>(std::max<long>(
      1, std::lround(static_cast<double>(sig.size()) * fs_target / sig.fs())));
  std::vector<double> l = ResampleChannel(sig.left(), m);
  std::vector<double> r =
      sig.IsDiotic() ? l : ResampleChannel(sig.right(), m);
  return StereoSignal(std::move(l), std::move(r), fs_target);
}

StereoSignal ToModelRate(const StereoSignal& sig) {
  return Resample(sig, kModelSampleRate);
}

}  // namespace earq
