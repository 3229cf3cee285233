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

#include "earq/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <locale>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace earq {

using nlohmann::json;

Audiogram ParseAudiogram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("audiogram: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("freqs_hz") || !doc.contains("hl_db")) {
    throw std::invalid_argument(
        "audiogram: expected an object with freqs_hz and hl_db");
  }
  std::vector<double> freqs, hl;
  try {
    freqs = doc.at("freqs_hz").get<std::vector<double>>();
    hl = doc.at("hl_db").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("audiogram: ") + e.what());
  }
  return SplitAudiogram(std::move(freqs), std::move(hl));
}

Audiogram LoadAudiogram(const std::optional<std::filesystem::path>& path) {
  if (!path.has_value()) return NormalHearing();
  std::ifstream file(*path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot read audiogram " + path->string());
  }
  const std::string text((std::istreambuf_iterator<char>(file)),
                         std::istreambuf_iterator<char>());
  return ParseAudiogram(text);
}

std::string FormatNumber(double value, int precision) {
  if (!std::isfinite(value)) return "nan";
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.setf(std::ios::fixed);
  out.precision(precision);
  // Avoids "-0.000000".
  if (std::abs(value) < 0.5 * std::pow(10.0, -precision)) value = 0.0;
  out << value;
  return out.str();
}

std::string QualityReportCsv(const QualityReport& r) {
  std::string csv = "q_mon,q_bin,overall,dprime_mon,dprime_gamma,dprime_ild,dprime_bin\n";
  for (double v : {r.q_mon, r.q_bin, r.overall, r.dprime_mon, r.dprime_gamma,
                   r.dprime_ild, r.dprime_bin}) {
    csv += FormatNumber(v);
    csv += ',';
  }
  csv.back() = '\n';
  return csv;
}

std::string QualityReportJson(const QualityReport& r) {
  json doc = {
      {"q_mon", r.q_mon},
      {"q_bin", r.q_bin},
      {"overall", r.overall},
      {"dprime_mon", r.dprime_mon},
      {"dprime_gamma", r.dprime_gamma},
      {"dprime_ild", r.dprime_ild},
      {"dprime_bin", r.dprime_bin},
      {"diagnostics",
       {{"dprime_mon_left", r.dprime_mon_left},
        {"dprime_mon_right", r.dprime_mon_right},
        {"snr_mon_left_db", r.snr_mon_left_db},
        {"snr_mon_right_db", r.snr_mon_right_db}}},
  };
  return doc.dump(2) + "\n";
}

std::string LoudnessResultCsv(const LoudnessResult& result, bool per_channel) {
  std::string csv = "sones,internal,peak_time_s\n";
  csv += FormatNumber(result.sones) + "," + FormatNumber(result.internal) +
         "," + FormatNumber(result.peak_time_s) + "\n";
  if (!per_channel) return csv;
  csv += "\ntime_s";
  for (double cf : ErbCenterFrequencies()) csv += "," + FormatNumber(cf, 1);
  csv += '\n';
  const SpecificLoudness& spec = result.binaural;
  for (size_t t = 0; t < spec.values.size(); ++t) {
    csv += FormatNumber(static_cast<double>(t + 1) * spec.step_s);
    for (double v : spec.values[t]) csv += "," + FormatNumber(v);
    csv += '\n';
  }
  return csv;
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double Map(double v, double from, double to) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double t = ((log ? std::log10(v) : v) - a) / (b - a);
    return from + t * (to - from);
  }
};

Axis FitAxis(const Chart& chart, bool x_axis) {
  const bool log = x_axis ? chart.log_x : chart.log_y;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const ChartSeries& s : chart.series) {
    for (double v : x_axis ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {log ? 1.0 : 0.0, log ? 10.0 : 1.0, log};
  if (hi == lo) {
    hi = log ? lo * 10.0 : lo + 1.0;
  }
  return {lo, hi, log};
}

}  // namespace

std::string SvgLineChart(const Chart& chart) {
  const Axis xa = FitAxis(chart, true);
  const Axis ya = FitAxis(chart, false);
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << Escape(chart.title)
      << "</text>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double xv = xa.log ? std::pow(10.0, std::log10(xa.lo) +
                                                  t * std::log10(xa.hi / xa.lo))
                             : xa.lo + t * (xa.hi - xa.lo);
    const double yv = ya.log ? std::pow(10.0, std::log10(ya.lo) +
                                                  t * std::log10(ya.hi / ya.lo))
                             : ya.lo + t * (ya.hi - ya.lo);
    const double px = x0 + t * (x1 - x0);
    const double py = y0 + t * (y1 - y0);
    svg << "<text x=\"" << px << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << FormatNumber(xv, 1) << "</text>\n"
        << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << FormatNumber(yv, 2) << "</text>\n";
  }
  svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << Escape(chart.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << Escape(chart.y_label) << "</text>\n";

  for (size_t s = 0; s < chart.series.size(); ++s) {
    const ChartSeries& series = chart.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < std::min(series.x.size(), series.y.size()); ++i) {
      const double xv = series.x[i], yv = series.y[i];
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      if ((xa.log && xv <= 0.0) || (ya.log && yv <= 0.0)) continue;
      svg << FormatNumber(xa.Map(xv, x0, x1), 2) << ','
          << FormatNumber(ya.Map(yv, y0, y1), 2) << ' ';
    }
    svg << "\"/>\n"
        << "<text x=\"" << x1 + 10 << "\" y=\"" << kTop + 16 * (s + 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << Escape(series.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace earq
