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

#ifndef EARQ_WAV_H_
#define EARQ_WAV_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "earq/signal.h"

namespace earq {

class WavError : public std::runtime_error {
 public:
  enum class Kind { kUnreadable, kUnsupportedEncoding, kEmpty };

  WavError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class WavEncoding { kPcm16, kPcm24, kFloat32 };

// Reads a PCM16/PCM24/float32 RIFF file with one or two channels. Mono files
// are duplicated to both ears; samples are scaled to [-1, 1] full scale.
StereoSignal LoadWav(const std::filesystem::path& path);

// Writes a two-channel file. PCM encodings clip to [-1, 1].
void SaveWav(const std::filesystem::path& path, const StereoSignal& sig,
             WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace earq

#endif  // EARQ_WAV_H_
