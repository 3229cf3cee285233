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

#include "earq/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "earq/io.h"
#include "earq/signal.h"

namespace earq {

namespace {

constexpr double kMinLevelDb = 0.0;
constexpr double kMaxLevelDb = 110.0;
constexpr size_t kElcPoints = 12;
constexpr double kElcLowHz = 100.0;
constexpr double kElcHighHz = 10000.0;
constexpr double kReferenceToneHz = 1000.0;

// Evaluates fn(0..n-1) on a small worker pool and returns results in index
// order, so output never depends on scheduling.
template <typename T, typename Fn>
std::vector<T> OrderedMap(size_t n, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  const size_t workers =
      std::min<size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) slots[i] = fn(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) {
          try {
            slots[i] = fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::optional<T>& s : slots) out.push_back(std::move(*s));
  return out;
}

StimulusGenerator Present(StimulusGenerator gen, bool monaural) {
  if (!monaural) return gen;
  return [gen = std::move(gen)](double level) { return gen(level).LeftOnly(); };
}

StimulusGenerator ToneGenerator(double freq_hz, double dur_s, bool monaural) {
  return Present(
      [freq_hz, dur_s](double level) {
        return SynthTone(freq_hz, dur_s, level, kModelSampleRate);
      },
      monaural);
}

constexpr double kUnitLevelDb = 60.0;

StimulusGenerator NoiseGenerator(const ExperimentSpec& spec,
                                 double bandwidth_hz) {
  StereoSignal unit = SynthNoiseBand(spec.center_hz, bandwidth_hz,
                                     spec.duration_s, kUnitLevelDb,
                                     kModelSampleRate,
                                     StimulusSeed(spec.seed, bandwidth_hz));
  return Present(ScaledStimulus(std::move(unit), kUnitLevelDb), spec.monaural);
}

void CheckLevel(double level) {
  if (!(level >= kMinLevelDb && level <= kMaxLevelDb)) {
    throw std::invalid_argument("experiment level " + FormatNumber(level, 1) +
                                " dB SPL outside [0, 110]");
  }
}

void CheckFrequency(double hz) {
  if (!(hz > 0.0 && hz < kModelSampleRate / 2.0)) {
    throw std::invalid_argument("experiment frequency " + FormatNumber(hz, 1) +
                                " Hz outside (0, Nyquist)");
  }
}

std::string OptionalNumber(const std::optional<double>& v) {
  return v.has_value() ? FormatNumber(*v) : std::string();
}

}  // namespace

ExperimentKind ParseExperimentKind(std::string_view name) {
  if (name == "loudness-function") return ExperimentKind::kLoudnessFunction;
  if (name == "elc") return ExperimentKind::kElc;
  if (name == "slsum") return ExperimentKind::kSlsum;
  if (name == "quality-ladder" || name == "quality") {
    return ExperimentKind::kQualityLadder;
  }
  throw std::invalid_argument(
      "unknown experiment '" + std::string(name) +
      "' (expected loudness-function, elc, slsum or quality-ladder)");
}

std::string ExperimentName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLoudnessFunction:
      return "loudness-function";
    case ExperimentKind::kElc:
      return "elc";
    case ExperimentKind::kSlsum:
      return "slsum";
    case ExperimentKind::kQualityLadder:
      return "quality-ladder";
  }
  return "unknown";
}

std::vector<double> ElcGrid() {
  std::vector<double> grid(kElcPoints);
  const double ratio = std::log(kElcHighHz / kElcLowHz);
  for (size_t k = 0; k < kElcPoints; ++k) {
    grid[k] = kElcLowHz * std::exp(ratio * static_cast<double>(k) /
                                   static_cast<double>(kElcPoints - 1));
  }
  grid.back() = kElcHighHz;
  return grid;
}

uint64_t StimulusSeed(uint64_t seed, double bandwidth_hz) {
  // splitmix64 finalizer over the seed and the rounded bandwidth.
  uint64_t z = seed * 0x9e3779b97f4a7c15ULL +
               static_cast<uint64_t>(std::llround(bandwidth_hz * 1000.0));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ExperimentSpec ExperimentSpec::Defaults(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ExperimentKind::kLoudnessFunction:
      for (int l = 0; l <= 100; l += 10) spec.levels_db.push_back(l);
      spec.duration_s = 0.5;
      break;
    case ExperimentKind::kElc:
      for (int p = 0; p <= 50; p += 10) spec.levels_db.push_back(p);
      spec.freqs_hz = ElcGrid();
      spec.duration_s = 0.4;
      break;
    case ExperimentKind::kSlsum:
      spec.levels_db = {45.0, 55.0, 65.0};
      spec.bandwidths_hz = {200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0};
      spec.duration_s = 1.0;
      break;
    case ExperimentKind::kQualityLadder:
      spec.levels_db = {65.0};
      spec.duration_s = 1.0;
      break;
  }
  return spec;
}

void ExperimentSpec::Validate() const {
  if (levels_db.empty()) {
    throw std::invalid_argument("experiment needs at least one level");
  }
  for (double l : levels_db) CheckLevel(l);
  if (!(duration_s > 0.0 && duration_s <= 10.0)) {
    throw std::invalid_argument("experiment duration must lie in (0, 10] s");
  }
  switch (kind) {
    case ExperimentKind::kLoudnessFunction:
      CheckFrequency(tone_hz);
      break;
    case ExperimentKind::kElc:
      if (freqs_hz.empty()) {
        throw std::invalid_argument("ELC needs at least one frequency");
      }
      for (double f : freqs_hz) CheckFrequency(f);
      break;
    case ExperimentKind::kSlsum: {
      if (bandwidths_hz.empty()) {
        throw std::invalid_argument("summation needs at least one bandwidth");
      }
      std::vector<double> all = bandwidths_hz;
      all.push_back(reference_bandwidth_hz);
      for (double bw : all) {
        if (!(bw > 0.0)) {
          throw std::invalid_argument("noise bandwidth must be positive");
        }
        CheckFrequency(NoiseBandEdges(center_hz, bw).second);
      }
      break;
    }
    case ExperimentKind::kQualityLadder:
      if (duration_s < kMinFrameSeconds) {
        throw std::invalid_argument("quality ladder needs at least one frame");
      }
      break;
  }
}

std::vector<LoudnessFunctionRow> RunLoudnessFunction(
    const ExperimentSpec& spec, const LoudnessModel& model,
    const Audiogram& ag) {
  const StimulusGenerator tone =
      ToneGenerator(spec.tone_hz, spec.duration_s, spec.monaural);
  return OrderedMap<LoudnessFunctionRow>(spec.levels_db.size(), [&](size_t i) {
    const double level = spec.levels_db[i];
    return LoudnessFunctionRow{level, model.Sones(tone(level), ag)};
  });
}

std::vector<ElcRow> RunElc(const ExperimentSpec& spec,
                           const LoudnessModel& model, const Audiogram& ag) {
  std::vector<double> freqs = spec.freqs_hz;
  if (std::find(freqs.begin(), freqs.end(), kReferenceToneHz) == freqs.end()) {
    freqs.push_back(kReferenceToneHz);
  }
  std::sort(freqs.begin(), freqs.end());

  const StimulusGenerator reference =
      ToneGenerator(kReferenceToneHz, spec.duration_s, spec.monaural);
  const size_t nf = freqs.size();
  return OrderedMap<ElcRow>(spec.levels_db.size() * nf, [&](size_t i) {
    const double phon = spec.levels_db[i / nf];
    const double freq = freqs[i % nf];
    ElcRow row{freq, phon, std::nullopt};
    if (freq == kReferenceToneHz) {
      row.level_db_spl = phon;
      return row;
    }
    const StimulusGenerator probe =
        ToneGenerator(freq, spec.duration_s, spec.monaural);
    try {
      if (phon == 0.0) {
        row.level_db_spl = DetectionThreshold(model, probe, ag);
      } else {
        row.level_db_spl = MatchLevel(model, probe, reference(phon), ag);
      }
    } catch (const MatchError&) {
      // Recorded as a missing value.
    }
    return row;
  });
}

std::vector<SlsumRow> RunSlsum(const ExperimentSpec& spec,
                               const LoudnessModel& model,
                               const Audiogram& ag) {
  const StimulusGenerator reference =
      NoiseGenerator(spec, spec.reference_bandwidth_hz);
  std::vector<StimulusGenerator> probes;
  for (double bw : spec.bandwidths_hz) probes.push_back(NoiseGenerator(spec, bw));

  const size_t nb = spec.bandwidths_hz.size();
  return OrderedMap<SlsumRow>(spec.levels_db.size() * nb, [&](size_t i) {
    const double ref_level = spec.levels_db[i / nb];
    SlsumRow row{spec.bandwidths_hz[i % nb], ref_level, std::nullopt};
    try {
      row.matched_level_db_spl =
          MatchLevel(model, probes[i % nb], reference(ref_level), ag);
    } catch (const MatchError&) {
    }
    return row;
  });
}

std::vector<LadderRow> RunQualityLadder(const ExperimentSpec& spec,
                                        const Audiogram& ag) {
  struct Step {
    DistortionKind kind;
    double param;
  };
  std::vector<Step> steps;
  for (double snr : {30.0, 20.0, 10.0, 0.0}) {
    steps.push_back({DistortionKind::kAdditiveNoise, snr});
  }
  for (double tilt : {0.0, 3.0, 6.0, 12.0}) {
    steps.push_back({DistortionKind::kTilt, tilt});
  }
  for (double ild : {0.0, 3.0, 6.0, 12.0}) {
    steps.push_back({DistortionKind::kIldShift, ild});
  }
  for (double mix : {0.0, 0.25, 0.5, 1.0}) {
    steps.push_back({DistortionKind::kDecorrelate, mix});
  }

  StereoSignal ref = SynthSpeechShapedNoise(spec.duration_s, spec.levels_db[0],
                                            kModelSampleRate, spec.seed);
  if (spec.monaural) ref = ref.LeftOnly();
  return OrderedMap<LadderRow>(steps.size(), [&](size_t i) {
    const StereoSignal test =
        Distort(ref, steps[i].kind, steps[i].param, spec.seed + 1);
    return LadderRow{steps[i].kind, steps[i].param,
                     PredictQuality(ref, test, ag)};
  });
}

std::string LoudnessFunctionCsv(const std::vector<LoudnessFunctionRow>& rows) {
  std::string csv = "level_db_spl,sones\n";
  for (const LoudnessFunctionRow& r : rows) {
    csv += FormatNumber(r.level_db_spl) + "," + FormatNumber(r.sones) + "\n";
  }
  return csv;
}

std::string ElcCsv(const std::vector<ElcRow>& rows) {
  std::string csv = "freq_hz,phon,level_db_spl\n";
  for (const ElcRow& r : rows) {
    csv += FormatNumber(r.freq_hz) + "," + FormatNumber(r.phon) + "," +
           OptionalNumber(r.level_db_spl) + "\n";
  }
  return csv;
}

std::string SlsumCsv(const std::vector<SlsumRow>& rows) {
  std::string csv = "bandwidth_hz,ref_level_db_spl,matched_level_db_spl\n";
  for (const SlsumRow& r : rows) {
    csv += FormatNumber(r.bandwidth_hz) + "," +
           FormatNumber(r.ref_level_db_spl) + "," +
           OptionalNumber(r.matched_level_db_spl) + "\n";
  }
  return csv;
}

std::string LadderCsv(const std::vector<LadderRow>& rows) {
  std::string csv =
      "distortion,param,q_mon,q_bin,overall,dprime_mon,dprime_gamma,"
      "dprime_ild,dprime_bin\n";
  for (const LadderRow& r : rows) {
    const QualityReport& q = r.report;
    csv += DistortionName(r.kind) + "," + FormatNumber(r.param);
    for (double v : {q.q_mon, q.q_bin, q.overall, q.dprime_mon, q.dprime_gamma,
                     q.dprime_ild, q.dprime_bin}) {
      csv += "," + FormatNumber(v);
    }
    csv += "\n";
  }
  return csv;
}

std::string LoudnessFunctionSvg(const std::vector<LoudnessFunctionRow>& rows) {
  Chart chart{"Loudness function", "Level (dB SPL)", "Loudness (sones)",
              false, true, {}};
  ChartSeries series{"1-kHz tone", {}, {}};
  for (const LoudnessFunctionRow& r : rows) {
    series.x.push_back(r.level_db_spl);
    series.y.push_back(r.sones);
  }
  chart.series.push_back(std::move(series));
  return SvgLineChart(chart);
}

std::string ElcSvg(const std::vector<ElcRow>& rows) {
  Chart chart{"Equal-loudness contours", "Frequency (Hz)", "Level (dB SPL)",
              true, false, {}};
  std::map<double, ChartSeries> by_phon;
  for (const ElcRow& r : rows) {
    if (!r.level_db_spl.has_value()) continue;
    ChartSeries& s = by_phon[r.phon];
    s.name = FormatNumber(r.phon, 0) + " phon";
    s.x.push_back(r.freq_hz);
    s.y.push_back(*r.level_db_spl);
  }
  for (auto& [phon, s] : by_phon) chart.series.push_back(std::move(s));
  return SvgLineChart(chart);
}

std::string SlsumSvg(const std::vector<SlsumRow>& rows) {
  Chart chart{"Spectral loudness summation", "Bandwidth (Hz)",
              "Matched level (dB SPL)", true, false, {}};
  std::map<double, ChartSeries> by_ref;
  for (const SlsumRow& r : rows) {
    if (!r.matched_level_db_spl.has_value()) continue;
    ChartSeries& s = by_ref[r.ref_level_db_spl];
    s.name = "ref " + FormatNumber(r.ref_level_db_spl, 0) + " dB";
    s.x.push_back(r.bandwidth_hz);
    s.y.push_back(*r.matched_level_db_spl);
  }
  for (auto& [ref, s] : by_ref) chart.series.push_back(std::move(s));
  return SvgLineChart(chart);
}

std::string LadderSvg(const std::vector<LadderRow>& rows) {
  Chart chart{"Quality ladder", "Ladder step", "Overall quality", false, false,
              {}};
  std::vector<ChartSeries> series;
  for (const LadderRow& r : rows) {
    const std::string name = DistortionName(r.kind);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const ChartSeries& s) { return s.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}, {}});
      it = series.end() - 1;
    }
    it->x.push_back(static_cast<double>(it->x.size() + 1));
    it->y.push_back(r.report.overall);
  }
  chart.series = std::move(series);
  return SvgLineChart(chart);
}

ExperimentOutput RunExperiment(const ExperimentSpec& spec,
                               const LoudnessModel& model,
                               const Audiogram& ag) {
  spec.Validate();
  switch (spec.kind) {
    case ExperimentKind::kLoudnessFunction: {
      const auto rows = RunLoudnessFunction(spec, model, ag);
      return {LoudnessFunctionCsv(rows), LoudnessFunctionSvg(rows)};
    }
    case ExperimentKind::kElc: {
      const auto rows = RunElc(spec, model, ag);
      return {ElcCsv(rows), ElcSvg(rows)};
    }
    case ExperimentKind::kSlsum: {
      const auto rows = RunSlsum(spec, model, ag);
      return {SlsumCsv(rows), SlsumSvg(rows)};
    }
    case ExperimentKind::kQualityLadder: {
      const auto rows = RunQualityLadder(spec, ag);
      return {LadderCsv(rows), LadderSvg(rows)};
    }
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace earq
