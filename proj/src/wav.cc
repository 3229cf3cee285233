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

#include "earq/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace earq {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

double DecodeSample(const uint8_t* p, uint16_t format, uint16_t bits) {
  if (format == kFormatFloat) {
    uint32_t raw = ReadU32(p);
    float f;
    std::memcpy(&f, &raw, sizeof(f));
    return static_cast<double>(f);
  }
  if (bits == 16) {
    return static_cast<int16_t>(ReadU16(p)) / 32768.0;
  }
  // 24-bit: sign-extend from the top byte.
  int32_t v = static_cast<int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
  if (v & 0x800000) v -= 0x1000000;
  return v / 8388608.0;
}

}  // namespace

StereoSignal LoadWav(const std::filesystem::path& path) {
  using Kind = WavError::Kind;
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw WavError(Kind::kUnreadable, "cannot open " + path.string());
  }
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(Kind::kUnreadable, path.string() + " is not a RIFF/WAVE file");
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  size_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const size_t size = ReadU32(chunk + 4);
    const size_t available = bytes.size() - pos - 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        throw WavError(Kind::kUnreadable, "truncated fmt chunk");
      }
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kFormatExtensible && size >= 26) {
        format = ReadU16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Some writers leave the size unset for streamed output.
      data_size = std::min(size, available);
    }
    pos += 8 + size + (size & 1);
  }
  if (!have_fmt || data == nullptr) {
    throw WavError(Kind::kUnreadable, path.string() + " lacks fmt or data");
  }
  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24);
  const bool flt = format == kFormatFloat && bits == 32;
  if (!(pcm || flt) || channels < 1 || channels > 2 || rate == 0) {
    throw WavError(Kind::kUnsupportedEncoding,
                   "unsupported encoding: format " + std::to_string(format) +
                       ", " + std::to_string(bits) + " bit, " +
                       std::to_string(channels) + " channel(s)");
  }
  const size_t frame_bytes = static_cast<size_t>(bits / 8) * channels;
  const size_t frames = data_size / frame_bytes;
  if (frames == 0) {
    throw WavError(Kind::kEmpty, path.string() + " contains no audio");
  }
  std::vector<double> left(frames), right(frames);
  for (size_t i = 0; i < frames; ++i) {
    const uint8_t* p = data + i * frame_bytes;
    left[i] = DecodeSample(p, format, bits);
    right[i] = channels == 2 ? DecodeSample(p + bits / 8, format, bits) : left[i];
  }
  try {
    return StereoSignal(std::move(left), std::move(right), rate);
  } catch (const std::invalid_argument& e) {
    throw WavError(Kind::kUnsupportedEncoding, e.what());
  }
}

void SaveWav(const std::filesystem::path& path, const StereoSignal& sig,
             WavEncoding encoding) {
  const uint16_t bits = encoding == WavEncoding::kPcm16   ? 16
                        : encoding == WavEncoding::kPcm24 ? 24
                                                          : 32;
  const uint16_t format =
      encoding == WavEncoding::kFloat32 ? kFormatFloat : kFormatPcm;
  const uint16_t channels = 2;
  const uint32_t rate = static_cast<uint32_t>(std::lround(sig.fs()));
  const uint32_t data_bytes =
      static_cast<uint32_t>(sig.size() * channels * (bits / 8));

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, format);
  PutU16(out, channels);
  PutU32(out, rate);
  PutU32(out, rate * channels * (bits / 8));
  PutU16(out, static_cast<uint16_t>(channels * (bits / 8)));
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_bytes);

  auto put_sample = [&](double v) {
    if (encoding == WavEncoding::kFloat32) {
      const float f = static_cast<float>(v);
      uint32_t raw;
      std::memcpy(&raw, &f, sizeof(raw));
      PutU32(out, raw);
      return;
    }
    v = std::clamp(v, -1.0, 1.0);
    if (encoding == WavEncoding::kPcm16) {
      const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
      PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
    } else {
      const long q =
          std::clamp(std::lround(v * 8388608.0), -8388608L, 8388607L);
      const auto u = static_cast<uint32_t>(q);
      out.push_back(static_cast<uint8_t>(u & 0xFF));
      out.push_back(static_cast<uint8_t>((u >> 8) & 0xFF));
      out.push_back(static_cast<uint8_t>((u >> 16) & 0xFF));
    }
  };
  for (size_t i = 0; i < sig.size(); ++i) {
    put_sample(sig.left()[i]);
    put_sample(sig.right()[i]);
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw WavError(WavError::Kind::kUnreadable,
                            "cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
}

}  // namespace earq
