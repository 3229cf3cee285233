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

#include "earq/periphery.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace earq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gammatone equivalent-rectangular-bandwidth scaling for order 4.
constexpr double kGammatoneBandwidthScale = 1.019;

// Free-field hearing threshold, third-octave frequencies (ISO 389-7 shape).
constexpr std::array<double, 29> kThresholdHz = {
    20,   25,   31.5, 40,   50,   63,   80,   100,  125,  160,
    200,  250,  315,  400,  500,  630,  800,  1000, 1250, 1600,
    2000, 2500, 3150, 4000, 5000, 6300, 8000, 10000, 12500};
constexpr std::array<double, 29> kThresholdDb = {
    78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9,
    14.4, 11.4, 8.6,  6.2,  4.4,  3.0,  2.2,  2.4,  3.5,  1.7,
    -1.3, -4.2, -6.0, -5.4, -1.5, 6.0,  12.6, 13.9, 12.3};

// Linear interpolation in log-frequency with edge clamping. `xs` ascending.
double InterpolateLogFreq(std::span<const double> xs, std::span<const double> ys,
                          double hz) {
  if (xs.size() == 1 || hz <= xs.front()) return ys.front();
  if (hz >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), hz);
  const size_t hi = static_cast<size_t>(it - xs.begin());
  const size_t lo = hi - 1;
  const double t = std::log(hz / xs[lo]) / std::log(xs[hi] / xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

struct Biquad {
  double b0, b1, b2, a1, a2;  // a0 normalized to 1

  double MagnitudeAt(double hz, double fs) const {
    const Complex z = std::polar(1.0, -kTwoPi * hz / fs);  // z^-1
    const Complex num = b0 + b1 * z + b2 * z * z;
    const Complex den = 1.0 + a1 * z + a2 * z * z;
    return std::abs(num / den);
  }

  std::vector<double> Filter(std::span<const double> x) const {
    std::vector<double> y(x.size());
    double s1 = 0.0, s2 = 0.0;  // transposed direct form II
    for (size_t i = 0; i < x.size(); ++i) {
      const double out = b0 * x[i] + s1;
      s1 = b1 * x[i] - a1 * out + s2;
      s2 = b2 * x[i] - a2 * out;
      y[i] = out;
    }
    return y;
  }
};

// Butterworth sections (Q = 1/sqrt(2)) via the bilinear transform.
Biquad ButterworthSection(double cutoff_hz, double fs, bool highpass) {
  const double w0 = kTwoPi * cutoff_hz / fs;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::numbers::sqrt2;
  const double a0 = 1.0 + alpha;
  const double k = highpass ? (1.0 + cw) / 2.0 : (1.0 - cw) / 2.0;
  const double b1 = highpass ? -(1.0 + cw) : (1.0 - cw);
  return Biquad{k / a0, b1 / a0, k / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

constexpr double kMiddleEarHighpassHz = 350.0;
constexpr double kMiddleEarLowpassHz = 6000.0;

struct MiddleEarFilter {
  Biquad highpass, lowpass;
  double norm;

  explicit MiddleEarFilter(double fs)
      : highpass(ButterworthSection(kMiddleEarHighpassHz, fs, true)),
        lowpass(ButterworthSection(kMiddleEarLowpassHz, fs, false)),
        norm(1.0 / (highpass.MagnitudeAt(1000.0, fs) *
                    lowpass.MagnitudeAt(1000.0, fs))) {}

  double MagnitudeAt(double hz, double fs) const {
    return norm * highpass.MagnitudeAt(hz, fs) * lowpass.MagnitudeAt(hz, fs);
  }

  std::vector<double> Filter(std::span<const double> x) const {
    std::vector<double> y = lowpass.Filter(highpass.Filter(x));
    for (double& v : y) v *= norm;
    return y;
  }
};

double OnePoleCoefficient(double cutoff_or_inverse_tau, double fs) {
  return std::exp(-kTwoPi * cutoff_or_inverse_tau / fs);
}

// Runs one channel of the level-dependent filterbank. The reference
// (fixed-bandwidth) gammatone drives the control level; the output gammatone
// is retuned and scaled once per block.
void AnalyzeChannel(std::span<const double> x, double cf, double fs,
                    double ohc_db, const FilterbankParams& params,
                    size_t block_size, std::vector<double>& output,
                    std::vector<double>& control_db) {
  const size_t n = x.size();
  output.assign(n, 0.0);
  control_db.assign((n + block_size - 1) / block_size, 0.0);

  const double base_bw = kGammatoneBandwidthScale * ErbBandwidthHz(cf);
  const double a_ref = std::exp(-kTwoPi * base_bw / fs);
  const double a_control = std::exp(-1.0 / (params.control_tau_s * fs));

  const Complex step = std::polar(1.0, -kTwoPi * cf / fs);
  Complex phasor(1.0, 0.0);  // e^{-j w i}

  std::array<Complex, 4> ref{};
  std::array<Complex, 4> out{};
  double power = 0.0;
  double a_out = a_ref;
  double gain = 1.0;

  for (size_t i = 0; i < n; ++i) {
    if (i % block_size == 0) {
      const double level =
          kCalibrationDbSpl + 10.0 * std::log10(std::max(power, 1e-30));
      control_db[i / block_size] = level;
      a_out = std::exp(-kTwoPi * base_bw *
                       BandwidthFactor(level, ohc_db, params) / fs);
      gain = std::pow(10.0, CochlearGainDb(level, ohc_db, params) / 20.0);
      // Keeps the oscillator on the unit circle.
      phasor /= std::abs(phasor);
    }
    const Complex base = x[i] * phasor;

    Complex v = base;
    for (Complex& s : ref) {
      s = v + a_ref * (s - v);
      v = s;
    }
    // Analytic amplitude is 2|v|; power of the real band signal is half its
    // square.
    power = 2.0 * std::norm(v) + a_control * (power - 2.0 * std::norm(v));

    Complex w = base;
    for (Complex& s : out) {
      s = w + a_out * (s - w);
      w = s;
    }
    output[i] = gain * 2.0 * (w * std::conj(phasor)).real();
    phasor *= step;
  }
}

}  // namespace

double ErbNumber(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double ErbNumberToHz(double erb_number) {
  return (std::pow(10.0, erb_number / 21.4) - 1.0) / 0.00437;
}

double ErbBandwidthHz(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

const ChannelArray& ErbCenterFrequencies() {
  static const ChannelArray cfs = [] {
    ChannelArray result{};
    const double lo = ErbNumber(kLowestCenterHz);
    const double hi = ErbNumber(kHighestCenterHz);
    for (size_t p = 0; p < kNumChannels; ++p) {
      const double t = static_cast<double>(p) / (kNumChannels - 1);
      result[p] = ErbNumberToHz(lo + t * (hi - lo));
    }
    result.front() = kLowestCenterHz;
    result.back() = kHighestCenterHz;
    return result;
  }();
  return cfs;
}

double AbsoluteThresholdDbSpl(double hz) {
  return InterpolateLogFreq(kThresholdHz, kThresholdDb, hz);
}

HearingLossSplit SplitHearingLoss(double hl_total_db) {
  if (!(hl_total_db >= 0.0) || !std::isfinite(hl_total_db)) {
    throw std::invalid_argument("hearing loss must be finite and >= 0 dB");
  }
  const double ohc = std::min(kOhcShare * hl_total_db, kOhcCapDb);
  return {ohc, hl_total_db - ohc};
}

bool Audiogram::IsNormal() const {
  return std::all_of(channel_total_db.begin(), channel_total_db.end(),
                     [](double v) { return v == 0.0; });
}

Audiogram SplitAudiogram(std::vector<double> freqs_hz,
                         std::vector<double> hl_db) {
  if (freqs_hz.empty() || freqs_hz.size() != hl_db.size()) {
    throw std::invalid_argument(
        "audiogram: frequency and loss lists must be non-empty and equal in "
        "length");
  }
  for (size_t i = 0; i < freqs_hz.size(); ++i) {
    if (!(freqs_hz[i] > 0.0) || (i > 0 && !(freqs_hz[i] > freqs_hz[i - 1]))) {
      throw std::invalid_argument(
          "audiogram: frequencies must be positive and strictly increasing");
    }
  }
  Audiogram ag;
  for (double hl : hl_db) {
    const HearingLossSplit split = SplitHearingLoss(hl);
    ag.ohc_db.push_back(split.ohc_db);
    ag.ihc_db.push_back(split.ihc_db);
  }
  const ChannelArray& cfs = ErbCenterFrequencies();
  for (size_t p = 0; p < kNumChannels; ++p) {
    const double total = InterpolateLogFreq(freqs_hz, hl_db, cfs[p]);
    const HearingLossSplit split = SplitHearingLoss(total);
    ag.channel_total_db[p] = total;
    ag.channel_ohc_db[p] = split.ohc_db;
    ag.channel_ihc_db[p] = split.ihc_db;
  }
  ag.freqs_hz = std::move(freqs_hz);
  ag.hl_db = std::move(hl_db);
  return ag;
}

Audiogram NormalHearing() {
  return SplitAudiogram({125, 250, 500, 1000, 2000, 4000, 8000},
                        std::vector<double>(7, 0.0));
}

double MiddleEarGainDb(double hz, double fs) {
  return 20.0 * std::log10(MiddleEarFilter(fs).MagnitudeAt(hz, fs));
}

StereoSignal MiddleEar(const StereoSignal& sig) {
  const MiddleEarFilter filter(sig.fs());
  std::vector<double> l = filter.Filter(sig.left());
  std::vector<double> r = sig.IsDiotic() ? l : filter.Filter(sig.right());
  return StereoSignal(std::move(l), std::move(r), sig.fs());
}

double CochlearGainDb(double level_db, double ohc_db,
                      const FilterbankParams& params) {
  double normal = params.max_gain_db;
  if (level_db >= params.knee_high_db) {
    normal = 0.0;
  } else if (level_db > params.knee_low_db) {
    normal = params.max_gain_db -
             (1.0 - params.compression) * (level_db - params.knee_low_db);
    normal = std::max(normal, 0.0);
  }
  const double ratio = std::clamp(ohc_db / kOhcCapDb, 0.0, 1.0);
  return std::min(normal, params.max_gain_db * (1.0 - ratio));
}

double BandwidthFactor(double level_db, double ohc_db,
                       const FilterbankParams& params) {
  const double ratio = std::clamp(ohc_db / kOhcCapDb, 0.0, 1.0);
  const double level_term =
      std::clamp((level_db - params.knee_low_db) /
                     (params.knee_high_db - params.knee_low_db),
                 0.0, 1.0);
  return 1.0 + params.ohc_broadening * ratio +
         params.level_broadening * level_term;
}

double NormalChannelThresholdDb(size_t channel) {
  const double cf = ErbCenterFrequencies()[channel];
  return AbsoluteThresholdDbSpl(cf) + MiddleEarGainDb(cf);
}

ChannelBank Analyze(const StereoSignal& sig, const Audiogram& ag,
                    const FilterbankParams& params) {
  ChannelBank bank;
  bank.center_hz = ErbCenterFrequencies();
  bank.fs = sig.fs();
  bank.block_size = std::max<size_t>(
      1, static_cast<size_t>(std::lround(params.block_s * sig.fs())));
  const bool diotic = sig.IsDiotic();
  for (int e = 0; e < 2; ++e) {
    EarChannels& ear = bank.ears[e];
    ear.output.resize(kNumChannels);
    ear.control_db.resize(kNumChannels);
    if (e == 1 && diotic) {
      ear = bank.ears[0];
      continue;
    }
    for (size_t p = 0; p < kNumChannels; ++p) {
      AnalyzeChannel(sig.ear(e), bank.center_hz[p], sig.fs(),
                     ag.channel_ohc_db[p], params, bank.block_size,
                     ear.output[p], ear.control_db[p]);
    }
  }
  return bank;
}

ChannelBank ApplyThreshold(const ChannelBank& bank, const Audiogram& ag) {
  ChannelBank gated = bank;
  for (EarChannels& ear : gated.ears) {
    for (size_t p = 0; p < ear.output.size(); ++p) {
      const double threshold =
          NormalChannelThresholdDb(p) + ag.channel_total_db[p];
      std::vector<double>& out = ear.output[p];
      const std::vector<double>& control = ear.control_db[p];
      for (size_t b = 0; b < control.size(); ++b) {
        if (control[b] >= threshold) continue;
        const size_t begin = b * bank.block_size;
        const size_t end = std::min(out.size(), begin + bank.block_size);
        std::fill(out.begin() + begin, out.begin() + end, 0.0);
      }
    }
  }
  return gated;
}

PeripheralRepresentation ExtractEnvTfs(const ChannelBank& bank) {
  PeripheralRepresentation rep;
  rep.center_hz = bank.center_hz;
  rep.fs = bank.fs;
  const double a = OnePoleCoefficient(kEnvelopeCutoffHz, bank.fs);
  const bool diotic = bank.ears[0].output == bank.ears[1].output;
  for (int e = 0; e < 2; ++e) {
    EarRepresentation& ear = rep.ears[e];
    if (e == 1 && diotic) {
      ear = rep.ears[0];
      continue;
    }
    const size_t channels = bank.ears[e].output.size();
    ear.env.resize(channels);
    ear.tfs.resize(channels);
    for (size_t p = 0; p < channels; ++p) {
      std::vector<Complex> analytic = AnalyticSignal(bank.ears[e].output[p]);
      std::vector<double>& env = ear.env[p];
      env.resize(analytic.size());
      double state = 0.0;
      for (size_t i = 0; i < analytic.size(); ++i) {
        state = std::abs(analytic[i]) + a * (state - std::abs(analytic[i]));
        env[i] = state;
      }
      if (rep.HasTfs(p)) ear.tfs[p] = std::move(analytic);
    }
  }
  return rep;
}

ChannelBank RunPeriphery(const StereoSignal& sig, const Audiogram& ag,
                         const FilterbankParams& params) {
  return Analyze(MiddleEar(ToModelRate(sig)), ag, params);
}

}  // namespace earq
