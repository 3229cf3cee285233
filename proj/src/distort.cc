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

#include "earq/distort.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "earq/fft.h"

namespace earq {

namespace {

constexpr double kTiltPivotHz = 1000.0;
// The tilt gain stops growing four octaves away from the pivot.
constexpr double kTiltMaxOctaves = 4.0;

std::vector<double> TiltChannel(const std::vector<double>& x, double fs,
                                double db_per_octave) {
  std::vector<Complex> spectrum = RealFft(x);
  const double df = fs / static_cast<double>(x.size());
  for (size_t k = 0; k < spectrum.size(); ++k) {
    const double f = std::max(static_cast<double>(k) * df, df);
    const double octaves =
        std::clamp(std::log2(f / kTiltPivotHz), -kTiltMaxOctaves,
                   kTiltMaxOctaves);
    spectrum[k] *= std::pow(10.0, db_per_octave * octaves / 20.0);
  }
  return InverseRealFft(spectrum, x.size());
}

// Same magnitude spectrum as `x`, uniformly random phases.
std::vector<double> PhaseRandomized(const std::vector<double>& x,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> spectrum = RealFft(x);
  for (size_t k = 1; k < spectrum.size(); ++k) {
    spectrum[k] = std::polar(std::abs(spectrum[k]), phase(rng));
  }
  if (x.size() % 2 == 0) spectrum.back() = std::abs(spectrum.back());
  return InverseRealFft(spectrum, x.size());
}

}  // namespace

DistortionKind ParseDistortionKind(std::string_view name) {
  if (name == "tilt") return DistortionKind::kTilt;
  if (name == "noise") return DistortionKind::kAdditiveNoise;
  if (name == "ild") return DistortionKind::kIldShift;
  if (name == "decorrelate") return DistortionKind::kDecorrelate;
  throw std::invalid_argument("unknown distortion kind '" + std::string(name) +
                              "' (expected tilt, noise, ild or decorrelate)");
}

std::string DistortionName(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::kTilt:
      return "tilt";
    case DistortionKind::kAdditiveNoise:
      return "noise";
    case DistortionKind::kIldShift:
      return "ild";
    case DistortionKind::kDecorrelate:
      return "decorrelate";
  }
  return "unknown";
}

StereoSignal Distort(const StereoSignal& sig, DistortionKind kind, double param,
                     uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (kind) {
    case DistortionKind::kTilt: {
      if (!(std::abs(param) <= 24.0)) {
        throw std::invalid_argument("tilt must lie within +-24 dB/octave");
      }
      std::vector<double> l = TiltChannel(sig.left(), sig.fs(), param);
      std::vector<double> r =
          sig.IsDiotic() ? l : TiltChannel(sig.right(), sig.fs(), param);
      return StereoSignal(std::move(l), std::move(r), sig.fs());
    }
    case DistortionKind::kAdditiveNoise: {
      if (!std::isfinite(param)) {
        throw std::invalid_argument("noise SNR must be finite");
      }
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::array<std::vector<double>, 2> ears = {sig.left(), sig.right()};
      for (std::vector<double>& ear : ears) {
        std::vector<double> noise(ear.size());
        for (double& v : noise) v = gauss(rng);
        const double noise_rms = Rms(noise);
        const double gain = Rms(ear) * std::pow(10.0, -param / 20.0) / noise_rms;
        for (size_t i = 0; i < ear.size(); ++i) ear[i] += gain * noise[i];
      }
      return StereoSignal(std::move(ears[0]), std::move(ears[1]), sig.fs());
    }
    case DistortionKind::kIldShift: {
      if (!(std::abs(param) <= 40.0)) {
        throw std::invalid_argument("ILD shift must lie within +-40 dB");
      }
      const double gain = std::pow(10.0, param / 20.0);
      std::vector<double> l = sig.left();
      for (double& v : l) v *= gain;
      return StereoSignal(std::move(l), sig.right(), sig.fs());
    }
    case DistortionKind::kDecorrelate: {
      if (!(param >= 0.0 && param <= 1.0)) {
        throw std::invalid_argument("decorrelation mix must lie in [0, 1]");
      }
      const double keep = std::sqrt(1.0 - param);
      const double mix = std::sqrt(param);
      std::array<std::vector<double>, 2> ears = {sig.left(), sig.right()};
      for (std::vector<double>& ear : ears) {
        const std::vector<double> noise = PhaseRandomized(ear, rng);
        for (size_t i = 0; i < ear.size(); ++i) {
          ear[i] = keep * ear[i] + mix * noise[i];
        }
      }
      return StereoSignal(std::move(ears[0]), std::move(ears[1]), sig.fs());
    }
  }
  throw std::invalid_argument("unknown distortion kind");
}

}  // namespace earq
