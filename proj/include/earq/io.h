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

// Text formats: audiogram files, report CSV/JSON and SVG line charts.

#ifndef EARQ_IO_H_
#define EARQ_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "earq/loudness.h"
#include "earq/periphery.h"
#include "earq/quality.h"

namespace earq {

// Parses {"freqs_hz": [...], "hl_db": [...]}. Throws std::invalid_argument on
// malformed content.
Audiogram ParseAudiogram(std::string_view text);

// Reads an audiogram file; no path means normal hearing. Throws
// std::runtime_error when the file cannot be read.
Audiogram LoadAudiogram(const std::optional<std::filesystem::path>& path);

// Fixed-point formatting with '.' as the decimal separator, independent of
// the global locale. Non-finite values print as "nan".
std::string FormatNumber(double value, int precision = 6);

// Header `q_mon,q_bin,overall,dprime_mon,dprime_gamma,dprime_ild,dprime_bin`
// and one row, LF-terminated.
std::string QualityReportCsv(const QualityReport& report);
std::string QualityReportJson(const QualityReport& report);

// Header `sones,internal,peak_time_s` and one row. With `per_channel`, a blank
// line and a `time_s,<cf>...` table of binaural specific loudness follow.
std::string LoudnessResultCsv(const LoudnessResult& result,
                              bool per_channel = false);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<ChartSeries> series;
};

// SVG 1.1 document with one polyline per series.
std::string SvgLineChart(const Chart& chart);

// Writes `text` to `path` in binary mode (LF line endings preserved).
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace earq

#endif  // EARQ_IO_H_
