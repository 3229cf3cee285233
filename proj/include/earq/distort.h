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

#ifndef EARQ_DISTORT_H_
#define EARQ_DISTORT_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "earq/signal.h"

namespace earq {

// Synthetic device effects for exercising the quality model.
enum class DistortionKind {
  // Spectral tilt in dB/octave around 1 kHz, identical in both ears.
  kTilt,
  // Independent white Gaussian noise per ear at the given SNR (dB).
  kAdditiveNoise,
  // Gain in dB applied to the left ear only.
  kIldShift,
  // Mix in [0, 1] of per-ear independent noise with the ear's own magnitude
  // spectrum; 1 leaves the ears fully independent.
  kDecorrelate,
};

// Accepts "tilt", "noise", "ild", "decorrelate". Throws std::invalid_argument
// for anything else.
DistortionKind ParseDistortionKind(std::string_view name);
std::string DistortionName(DistortionKind kind);

// Deterministic for a given seed. Throws std::invalid_argument when `param`
// is outside the documented range (|tilt| <= 24 dB/oct, |ild| <= 40 dB,
// mix in [0, 1]).
StereoSignal Distort(const StereoSignal& sig, DistortionKind kind, double param,
                     uint64_t seed = 0);

}  // namespace earq

#endif  // EARQ_DISTORT_H_
