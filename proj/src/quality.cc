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

#include "earq/quality.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace earq {

namespace {

void CheckGrid(size_t size, const FrameGrid& grid) {
  if (grid.frames.empty() || grid.frames.back().end > size) {
    throw QualityInputError("frame grid does not fit the signal");
  }
}

double MeanSquare(std::span<const double> x, const FrameGrid::Frame& f) {
  double sum = 0.0;
  for (size_t i = f.begin; i < f.end; ++i) sum += x[i] * x[i];
  return sum / static_cast<double>(f.end - f.begin);
}

}  // namespace

FrameGrid MakeFrameGrid(size_t num_samples, double fs) {
  const auto frame = static_cast<size_t>(std::lround(kFrameSeconds * fs));
  const auto min_frame = static_cast<size_t>(std::lround(kMinFrameSeconds * fs));
  if (num_samples < min_frame) {
    throw QualityInputError("signal shorter than 200 ms");
  }
  FrameGrid grid;
  grid.frame_length = frame;
  const size_t full = num_samples / frame;
  for (size_t k = 0; k < full; ++k) {
    grid.frames.push_back({k * frame, (k + 1) * frame});
  }
  const size_t remainder = num_samples - full * frame;
  if (remainder >= min_frame) {
    if (grid.frames.empty()) {
      grid.frames.push_back({0, num_samples});
    } else {
      grid.frames.back().end = num_samples;
    }
  }
  return grid;
}

ChannelSnr ColorationSnr(std::span<const double> env_ref,
                         std::span<const double> env_test,
                         const FrameGrid& grid, const QualityParams& params) {
  if (env_ref.size() != env_test.size()) {
    throw QualityInputError("reference and test envelopes differ in length");
  }
  CheckGrid(env_ref.size(), grid);
  const size_t n = grid.size();
  std::vector<double> p_ref(n), p_test(n);
  for (size_t k = 0; k < n; ++k) {
    p_ref[k] = MeanSquare(env_ref, grid.frames[k]);
    p_test[k] = MeanSquare(env_test, grid.frames[k]);
  }
  const double mean_ref =
      std::accumulate(p_ref.begin(), p_ref.end(), 0.0) / static_cast<double>(n);
  const double eps = std::pow(10.0, -params.snr_ceiling_db / 10.0) * mean_ref;

  auto snr_db = [&](double ref, double delta) {
    if (delta <= 0.0) return params.snr_ceiling_db;
    const double snr = 10.0 * std::log10(ref / (delta + eps));
    return std::clamp(snr, params.snr_floor_db, params.snr_ceiling_db);
  };
  ChannelSnr result;
  for (size_t k = 0; k < n; ++k) {
    result.incr_db += snr_db(p_ref[k], std::max(p_test[k] - p_ref[k], 0.0));
    result.decr_db += snr_db(p_ref[k], std::max(p_ref[k] - p_test[k], 0.0));
  }
  result.incr_db /= static_cast<double>(n);
  result.decr_db /= static_cast<double>(n);
  return result;
}

std::vector<ChannelSnr> ColorationSnrs(
    const std::vector<std::vector<double>>& env_ref,
    const std::vector<std::vector<double>>& env_test, const FrameGrid& grid,
    const QualityParams& params) {
  if (env_ref.size() != env_test.size()) {
    throw QualityInputError("reference and test channel counts differ");
  }
  std::vector<ChannelSnr> snrs;
  snrs.reserve(env_ref.size());
  for (size_t p = 0; p < env_ref.size(); ++p) {
    snrs.push_back(ColorationSnr(env_ref[p], env_test[p], grid, params));
  }
  return snrs;
}

double MonauralSnrDb(std::span<const ChannelSnr> snrs) {
  if (snrs.empty()) throw QualityInputError("no channels to pool");
  double sum = 0.0;
  for (const ChannelSnr& s : snrs) {
    const double inverse = std::pow(10.0, -0.5 * (s.incr_db + s.decr_db) / 10.0);
    sum += inverse * inverse;
  }
  return -10.0 * std::log10(std::sqrt(sum));
}

double DprimeMon(std::span<const ChannelSnr> snrs,
                 const QualityParams& params) {
  const double snr = MonauralSnrDb(snrs);
  const double t = (params.transform_upper_db - snr) /
                   (params.transform_upper_db - params.transform_lower_db);
  return params.dprime_max_mon * std::clamp(t, 0.0, 1.0);
}

std::vector<Complex> InterauralCoherence(std::span<const Complex> left,
                                         std::span<const Complex> right,
                                         const FrameGrid& grid) {
  if (left.size() != right.size()) {
    throw QualityInputError("left and right signals differ in length");
  }
  CheckGrid(left.size(), grid);
  std::vector<Complex> gamma;
  gamma.reserve(grid.size());
  for (const FrameGrid::Frame& f : grid.frames) {
    Complex cross = 0.0;
    double pl = 0.0, pr = 0.0;
    for (size_t i = f.begin; i < f.end; ++i) {
      cross += left[i] * std::conj(right[i]);
      pl += std::norm(left[i]);
      pr += std::norm(right[i]);
    }
    // Frame-length normalization cancels between numerator and denominator.
    gamma.push_back(pl > 0.0 && pr > 0.0 ? cross / std::sqrt(pl * pr)
                                         : Complex(0.0));
  }
  return gamma;
}

std::vector<double> InterauralLevelDifference(std::span<const double> left_env,
                                              std::span<const double> right_env,
                                              const FrameGrid& grid,
                                              const QualityParams& params) {
  if (left_env.size() != right_env.size()) {
    throw QualityInputError("left and right envelopes differ in length");
  }
  CheckGrid(left_env.size(), grid);
  std::vector<double> ild;
  ild.reserve(grid.size());
  for (const FrameGrid::Frame& f : grid.frames) {
    const double pl = MeanSquare(left_env, f);
    const double pr = MeanSquare(right_env, f);
    if (pl <= 0.0 && pr <= 0.0) {
      ild.push_back(0.0);
      continue;
    }
    const double db = 10.0 * std::log10(pl / pr);
    ild.push_back(std::clamp(db, -params.ild_clamp_db, params.ild_clamp_db));
  }
  return ild;
}

double CombineBinaural(double dprime_gamma, double dprime_ild,
                       double ild_weight) {
  return std::sqrt(dprime_gamma * dprime_gamma +
                   ild_weight * dprime_ild * dprime_ild);
}

BinauralDprime DprimeBin(const BinauralFeatures& ref,
                         const BinauralFeatures& test,
                         const QualityParams& params) {
  if (ref.gamma.size() != test.gamma.size() ||
      ref.ild.size() != test.ild.size()) {
    throw QualityInputError("binaural feature planes differ in channel count");
  }
  double sum_gamma = 0.0, sum_ild = 0.0;
  size_t count_gamma = 0, count_ild = 0;
  for (size_t p = 0; p < ref.gamma.size(); ++p) {
    if (ref.gamma[p].size() != test.gamma[p].size()) {
      throw QualityInputError("coherence planes differ in frame count");
    }
    for (size_t n = 0; n < ref.gamma[p].size(); ++n) {
      sum_gamma += std::norm(ref.gamma[p][n] - test.gamma[p][n]);
      ++count_gamma;
    }
  }
  for (size_t p = 0; p < ref.ild.size(); ++p) {
    if (ref.ild[p].size() != test.ild[p].size()) {
      throw QualityInputError("level-difference planes differ in frame count");
    }
    for (size_t n = 0; n < ref.ild[p].size(); ++n) {
      const double d = ref.ild[p][n] - test.ild[p][n];
      sum_ild += d * d;
      ++count_ild;
    }
  }
  BinauralDprime d;
  if (count_gamma > 0) {
    d.gamma = std::sqrt(sum_gamma / static_cast<double>(count_gamma)) /
              params.sigma_gamma;
  }
  if (count_ild > 0) {
    d.ild = std::sqrt(sum_ild / static_cast<double>(count_ild)) /
            params.sigma_ild_db;
  }
  d.bin = CombineBinaural(d.gamma, d.ild, params.ild_weight);
  return d;
}

QualityReport OverallQuality(double dprime_mon, double dprime_bin,
                             const QualityParams& params) {
  QualityReport report;
  report.dprime_mon = dprime_mon;
  report.dprime_bin = dprime_bin;
  report.q_mon = 1.0 - std::min(dprime_mon / params.dprime_max_mon, 1.0);
  report.q_bin = 1.0 - std::min(dprime_bin / params.dprime_max_bin, 1.0);
  report.overall = std::min(report.q_mon, report.q_bin);
  return report;
}

std::vector<size_t> QualityChannels() {
  std::vector<size_t> channels;
  const ChannelArray& cfs = ErbCenterFrequencies();
  for (size_t p = 0; p < kNumChannels; ++p) {
    if (cfs[p] >= kQualityLowestHz) channels.push_back(p);
  }
  return channels;
}

namespace {

// Envelope fluctuations as an analytic signal.
std::vector<Complex> EnvelopeAnalytic(const std::vector<double>& env) {
  const double mean =
      env.empty() ? 0.0
                  : std::accumulate(env.begin(), env.end(), 0.0) /
                        static_cast<double>(env.size());
  std::vector<double> ac(env.size());
  std::transform(env.begin(), env.end(), ac.begin(),
                 [mean](double v) { return v - mean; });
  return AnalyticSignal(ac);
}

}  // namespace

BinauralFeatures ExtractBinauralFeatures(const PeripheralRepresentation& rep,
                                         const FrameGrid& grid,
                                         const QualityParams& params) {
  BinauralFeatures features;
  const EarRepresentation& l = rep.ears[0];
  const EarRepresentation& r = rep.ears[1];
  for (size_t p : QualityChannels()) {
    if (rep.HasTfs(p)) {
      features.gamma.push_back(InterauralCoherence(l.tfs[p], r.tfs[p], grid));
    } else {
      features.gamma.push_back(InterauralCoherence(
          EnvelopeAnalytic(l.env[p]), EnvelopeAnalytic(r.env[p]), grid));
    }
    features.ild.push_back(
        InterauralLevelDifference(l.env[p], r.env[p], grid, params));
  }
  return features;
}

QualityReport PredictQuality(const StereoSignal& ref, const StereoSignal& test,
                             const Audiogram& ag, const QualityParams& params,
                             const FilterbankParams& filterbank) {
  if (ref.size() != test.size() || ref.fs() != test.fs()) {
    throw QualityInputError(
        "reference and test must have equal length and sample rate");
  }
  // Validates the duration before any processing.
  MakeFrameGrid(ref.size(), ref.fs());

  auto represent = [&](const StereoSignal& sig) {
    return ExtractEnvTfs(ApplyThreshold(RunPeriphery(sig, ag, filterbank), ag));
  };
  const PeripheralRepresentation rep_ref = represent(ref);
  const PeripheralRepresentation rep_test = represent(test);
  const FrameGrid grid =
      MakeFrameGrid(rep_ref.ears[0].env[0].size(), rep_ref.fs);

  const std::vector<size_t> channels = QualityChannels();
  std::array<double, 2> dprime_mon{};
  std::array<double, 2> snr_mon{};
  for (int e = 0; e < 2; ++e) {
    std::vector<ChannelSnr> snrs;
    for (size_t p : channels) {
      snrs.push_back(ColorationSnr(rep_ref.ears[e].env[p],
                                   rep_test.ears[e].env[p], grid, params));
    }
    snr_mon[e] = MonauralSnrDb(snrs);
    dprime_mon[e] = DprimeMon(snrs, params);
  }

  const BinauralDprime bin =
      DprimeBin(ExtractBinauralFeatures(rep_ref, grid, params),
                ExtractBinauralFeatures(rep_test, grid, params), params);

  // The better ear carries the monaural judgment.
  QualityReport report =
      OverallQuality(std::min(dprime_mon[0], dprime_mon[1]), bin.bin, params);
  report.dprime_gamma = bin.gamma;
  report.dprime_ild = bin.ild;
  report.dprime_mon_left = dprime_mon[0];
  report.dprime_mon_right = dprime_mon[1];
  report.snr_mon_left_db = snr_mon[0];
  report.snr_mon_right_db = snr_mon[1];
  return report;
}

}  // namespace earq
