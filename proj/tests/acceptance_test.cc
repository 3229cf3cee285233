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

// Acceptance report: one [PASS]/[FAIL] line per criterion. Exits non-zero if
// any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "earq/distort.h"
#include "earq/experiments.h"
#include "earq/fft.h"
#include "earq/io.h"
#include "earq/loudness.h"
#include "earq/quality.h"
#include "earq/signal.h"

namespace earq {
namespace {

constexpr double kFs = kModelSampleRate;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Check(const std::string& name, double limit_s,
           const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  bool pass = outcome.pass;
  std::string detail = outcome.detail;
  if (limit_s > 0.0 && elapsed >= limit_s) {
    pass = false;
    detail += "; runtime over " + FormatNumber(limit_s, 0) + " s";
  }
  if (!pass) ++failures;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << " ("
            << FormatNumber(elapsed, 2) << " s)" << std::endl;
}

Audiogram FlatLoss(double hl_db) {
  return SplitAudiogram({250, 500, 1000, 2000, 4000, 8000},
                        std::vector<double>(6, hl_db));
}

std::string Sci(double v) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(2) << v;
  return out.str();
}

std::string Join(const std::vector<double>& values, int precision = 3) {
  std::string s;
  for (double v : values) s += (s.empty() ? "" : " ") + FormatNumber(v, precision);
  return s;
}

Outcome QualityIdentity() {
  std::vector<StereoSignal> stimuli = {
      SynthTone(250.0, 0.8, 60.0, kFs),
      SynthTone(1000.0, 0.8, 70.0, kFs),
      SynthTone(4000.0, 0.8, 50.0, kFs),
      SynthNoiseBand(2000.0, 3200.0, 0.8, 65.0, kFs, 1),
      SynthNoiseBand(500.0, 200.0, 0.8, 55.0, kFs, 2),
      SynthSpeechShapedNoise(0.8, 65.0, kFs, 3),
      SynthSpeechShapedNoise(0.8, 45.0, kFs, 4),
      SynthSpeechShapedNoise(1.0, 75.0, kFs, 5),
  };
  // Two stimuli with distinct ears.
  const StereoSignal a = SynthSpeechShapedNoise(0.8, 65.0, kFs, 6);
  const StereoSignal b = SynthSpeechShapedNoise(0.8, 65.0, kFs, 7);
  stimuli.emplace_back(a.left(), b.left(), kFs);
  stimuli.push_back(Distort(a, DistortionKind::kIldShift, 8.0));

  double worst = 0.0;
  for (const StereoSignal& s : stimuli) {
    worst = std::max(worst,
                     std::abs(PredictQuality(s, s, NormalHearing()).overall - 1.0));
  }
  return {worst <= 1e-6, std::to_string(stimuli.size()) +
                             " stimuli, max |overall - 1| = " +
                             Sci(worst)};
}

Outcome QualityLadder() {
  const StereoSignal ref = SynthSpeechShapedNoise(1.2, 65.0, kFs, 0);
  auto ladder = [&](DistortionKind kind, std::vector<double> params) {
    std::vector<double> q;
    for (double p : params) {
      q.push_back(PredictQuality(ref, Distort(ref, kind, p, 1), NormalHearing())
                      .overall);
    }
    return q;
  };
  auto strictly_decreasing = [](const std::vector<double>& q) {
    for (size_t i = 1; i < q.size(); ++i) {
      if (!(q[i] < q[i - 1])) return false;
    }
    return true;
  };
  const std::vector<double> noise =
      ladder(DistortionKind::kAdditiveNoise, {30.0, 20.0, 10.0, 0.0});
  const std::vector<double> tilt =
      ladder(DistortionKind::kTilt, {0.0, 3.0, 6.0, 12.0});
  return {strictly_decreasing(noise) && strictly_decreasing(tilt),
          "noise SNR 30/20/10/0 -> " + Join(noise) + "; tilt 0/3/6/12 -> " +
              Join(tilt)};
}

Outcome PathSelectivity() {
  const StereoSignal ref = SynthSpeechShapedNoise(1.2, 65.0, kFs, 0);
  const QualityReport gain =
      PredictQuality(ref, Distort(ref, DistortionKind::kIldShift, 6.0),
                     NormalHearing());
  const QualityReport tilt = PredictQuality(
      ref, Distort(ref, DistortionKind::kTilt, 10.0), NormalHearing());
  return {gain.q_bin < gain.q_mon && tilt.q_mon < tilt.q_bin,
          "one-ear +6 dB: q_bin " + FormatNumber(gain.q_bin, 3) + " < q_mon " +
              FormatNumber(gain.q_mon, 3) + "; tilt +10 dB/oct: q_mon " +
              FormatNumber(tilt.q_mon, 3) + " < q_bin " +
              FormatNumber(tilt.q_bin, 3)};
}

Outcome Eq2Algebra() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // Half the pairs come straight from random d' values, half from random
    // feature planes through the full d'_bin computation.
    double g, d, bin;
    if (i % 2 == 0) {
      g = u(rng);
      d = u(rng);
      bin = CombineBinaural(g, d);
    } else {
      BinauralFeatures ref, test;
      ref.gamma.assign(3, std::vector<Complex>(2));
      test.gamma = ref.gamma;
      ref.ild.assign(3, std::vector<double>(2));
      test.ild = ref.ild;
      for (size_t p = 0; p < 3; ++p) {
        for (size_t n = 0; n < 2; ++n) {
          ref.gamma[p][n] = Complex(unit(rng), unit(rng)) * 0.7;
          test.gamma[p][n] = Complex(unit(rng), unit(rng)) * 0.7;
          ref.ild[p][n] = 30.0 * unit(rng);
          test.ild[p][n] = 30.0 * unit(rng);
        }
      }
      const BinauralDprime dp = DprimeBin(ref, test);
      g = dp.gamma;
      d = dp.ild;
      bin = dp.bin;
    }
    const double rhs = g * g + d * d / 13.0;
    if (rhs > 0.0) worst = std::max(worst, std::abs(bin * bin - rhs) / rhs);
  }
  return {worst <= 1e-12, "1000 pairs, max relative residual " +
                              Sci(worst)};
}

Outcome GammaOracle() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> mix(-1.0, 1.0);
  const size_t n = 17640;
  double worst = 0.0, largest = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(n), b(n);
    for (double& v : a) v = gauss(rng);
    for (double& v : b) v = gauss(rng);
    const double m = mix(rng);
    for (size_t i = 0; i < n; ++i) b[i] = m * a[i] + (1.0 - std::abs(m)) * b[i];
    const std::vector<Complex> l = AnalyticSignal(a);
    const std::vector<Complex> r = AnalyticSignal(b);
    const Complex gamma = InterauralCoherence(l, r, MakeFrameGrid(n, kFs))[0];
    Complex cross = 0.0;
    double pl = 0.0, pr = 0.0;
    for (size_t i = 0; i < n; ++i) {
      cross += l[i] * std::conj(r[i]);
      pl += std::norm(l[i]);
      pr += std::norm(r[i]);
    }
    const double dn = static_cast<double>(n);
    const Complex oracle = (cross / dn) / std::sqrt((pl / dn) * (pr / dn));
    worst = std::max(worst, std::abs(gamma - oracle));
    largest = std::max(largest, std::abs(gamma));
  }
  return {worst <= 1e-9 && largest <= 1.0 + 1e-9,
          "100 frames, max |gamma - brute force| = " + Sci(worst) +
              ", max |gamma| = " + FormatNumber(largest, 12)};
}

Outcome LoudnessAnchors() {
  const LoudnessModel model;
  const Audiogram nh = NormalHearing();
  const double s40 = model.Sones(SynthTone(1000.0, 0.5, 40.0, kFs), nh);
  const double s60 = model.Sones(SynthTone(1000.0, 0.5, 60.0, kFs), nh);
  const double s70 = model.Sones(SynthTone(1000.0, 0.5, 70.0, kFs), nh);
  const StereoSignal silence(std::vector<double>(22050, 0.0),
                             std::vector<double>(22050, 0.0), kFs);
  const double s0 = model.Sones(silence, nh);
  const double ratio = s70 / s60;
  return {std::abs(s40 - 1.0) <= 0.1 && ratio >= 1.8 && ratio <= 2.3 && s0 == 0.0,
          "40 dB -> " + FormatNumber(s40, 3) + " sone, 70/60 ratio " +
              FormatNumber(ratio, 3) + ", silence -> " + FormatNumber(s0, 3)};
}

const LoudnessModel& SharedModel() {
  static const LoudnessModel model;
  return model;
}

Outcome ElcShape() {
  const ExperimentSpec spec = ExperimentSpec::Defaults(ExperimentKind::kElc);
  const std::vector<ElcRow> rows = RunElc(spec, SharedModel(), NormalHearing());
  std::map<double, std::map<double, std::optional<double>>> by_freq;
  for (const ElcRow& r : rows) by_freq[r.freq_hz][r.phon] = r.level_db_spl;
  bool ok = true;
  std::string issues;
  for (const auto& [freq, contour] : by_freq) {
    std::optional<double> previous;
    for (const auto& [phon, level] : contour) {
      if (!level.has_value()) {
        ok = false;
        issues += " missing(" + FormatNumber(freq, 0) + "," + FormatNumber(phon, 0) + ")";
        continue;
      }
      if (previous.has_value() && !(*level > *previous)) {
        ok = false;
        issues += " cross(" + FormatNumber(freq, 0) + "," + FormatNumber(phon, 0) + ")";
      }
      previous = level;
    }
  }
  const double at100 = by_freq.at(100.0).at(40.0).value_or(NAN);
  ok = ok && at100 - 40.0 >= 10.0;
  return {ok, std::to_string(by_freq.size()) + " frequencies x 6 contours, 40 phon at 100 Hz = " +
                  FormatNumber(at100, 2) + " dB SPL" +
                  (issues.empty() ? ", no crossings" : issues)};
}

Outcome SpectralSummation() {
  const ExperimentSpec spec = ExperimentSpec::Defaults(ExperimentKind::kSlsum);
  const std::vector<SlsumRow> rows = RunSlsum(spec, SharedModel(), NormalHearing());
  std::vector<double> at65;
  bool ok = true;
  for (const SlsumRow& r : rows) {
    if (r.ref_level_db_spl != 65.0) continue;
    if (!r.matched_level_db_spl) {
      ok = false;
      continue;
    }
    at65.push_back(*r.matched_level_db_spl);
  }
  ok = ok && at65.size() == 6;
  for (size_t i = 1; ok && i < at65.size(); ++i) {
    if (at65[i] > at65[i - 1]) ok = false;
  }
  const double excess = at65.empty() ? NAN : at65.front() - 65.0;
  ok = ok && excess >= 3.0;
  return {ok, "65-dB reference, bandwidth 200..6400 -> " + Join(at65, 2) +
                  " dB SPL; 200-Hz excess " + FormatNumber(excess, 2) + " dB"};
}

Outcome HearingLoss() {
  const Audiogram hi = FlatLoss(40.0);
  const Audiogram nh = NormalHearing();
  auto ratio = [&](double level) {
    const StereoSignal tone = SynthTone(1000.0, 0.5, level, kFs);
    return SharedModel().Sones(tone, hi) / SharedModel().Sones(tone, nh);
  };
  const double r50 = ratio(50.0);
  const double r100 = ratio(100.0);
  return {r50 < 0.5 && r100 > r50, "HI/NH at 50 dB = " + FormatNumber(r50, 3) +
                                       ", at 100 dB = " + FormatNumber(r100, 3)};
}

Outcome BinauralInhibition() {
  const StereoSignal tone = SynthTone(1000.0, 0.5, 60.0, kFs);
  const double ratio = SharedModel().Sones(tone, NormalHearing()) /
                       SharedModel().Sones(tone.LeftOnly(), NormalHearing());
  return {ratio > 1.2 && ratio < 1.8,
          "diotic/monaural at 60 dB = " + FormatNumber(ratio, 3)};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome CliDeterminism() {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("earq_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool ok = true;
  std::string detail;
  for (const char* name : {"loudness-function", "elc", "slsum", "quality-ladder"}) {
    std::string csv[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (std::string(name) + std::to_string(run) + ".csv");
      const std::string cmd = std::string(EARQ_CLI_PATH) + " experiment " + name +
                              " --seed 7 --out " + out.string();
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ok = false;
      csv[run] = ReadFile(out);
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    ok = ok && same;
    detail += std::string(detail.empty() ? "" : ", ") + name +
              (same ? " identical" : " DIFFERS");
  }
  fs::remove_all(dir);
  return {ok, detail};
}

}  // namespace
}  // namespace earq

int main() {
  using earq::Check;
  std::cout << "note: listening-test correlations are not reproducible without "
               "the proprietary databases; the property suite below stands in."
            << std::endl;
  Check("quality-identity", 10.0, earq::QualityIdentity);
  Check("quality-monotone-ladder", 0.0, earq::QualityLadder);
  Check("path-selectivity", 0.0, earq::PathSelectivity);
  Check("binaural-combination-algebra", 0.0, earq::Eq2Algebra);
  Check("gamma-oracle", 0.0, earq::GammaOracle);
  Check("loudness-anchors", 5.0, earq::LoudnessAnchors);
  Check("elc-shape", 120.0, earq::ElcShape);
  Check("spectral-summation", 120.0, earq::SpectralSummation);
  Check("hearing-loss", 0.0, earq::HearingLoss);
  Check("binaural-inhibition", 0.0, earq::BinauralInhibition);
  Check("cli-determinism", 0.0, earq::CliDeterminism);
  std::cout << (earq::failures == 0 ? "all criteria passed"
                                    : std::to_string(earq::failures) +
                                          " criteria failed")
            << std::endl;
  return earq::failures == 0 ? 0 : 1;
}
