// Copyright 2026 The sfcmd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfcmd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

}  // namespace

std::string format_seconds(Micros us) {
  const bool negative = us < 0;
  const Micros mag = negative ? -us : us;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", negative ? "-" : "", static_cast<long long>(mag / kMicrosPerSecond),
                static_cast<long long>(mag % kMicrosPerSecond));
  return buf;
}

std::string results_csv(const GridReport& report) {
  std::ostringstream out;
  out << "id,tp_bool,duplicates,guesses,tp_s,fp_s,fn_s,tn_s,precision,recall,f1,status,error\n";
  for (const ExperimentResult& r : report.rows) {
    const BooleanScore& b = r.metrics.boolean;
    const TimeScore& t = r.metrics.time;
    out << csv_field(r.id) << ',' << b.tp_passes << ',' << b.hits << ',' << b.guesses << ','
        << format_seconds(t.tp_us) << ',' << format_seconds(t.fp_us) << ',' << format_seconds(t.fn_us) << ','
        << format_seconds(t.tn_us) << ',' << fixed(t.precision, 6) << ',' << fixed(t.recall, 6) << ','
        << fixed(t.f1, 6) << ',' << (r.ok ? (r.baseline ? "baseline" : "ok") : "failed") << ','
        << csv_field(r.error) << '\n';
  }
  return out.str();
}

std::string timeline_svg(const GridReport& report) {
  constexpr double kLabelWidth = 230.0;
  constexpr double kPlotWidth = 1100.0;
  constexpr double kLane = 14.0;
  constexpr double kGap = 4.0;
  constexpr double kTop = 30.0;
  const std::size_t lanes = report.rows.size() + 1;
  const double height = kTop + lanes * (kLane + kGap) + 30.0;
  const double width = kLabelWidth + kPlotWidth + 20.0;
  const Micros t0 = report.trip_span.begin;
  const double span = std::max<double>(1.0, static_cast<double>(report.trip_span.length()));
  auto x_of = [&](Micros t) { return kLabelWidth + kPlotWidth * static_cast<double>(t - t0) / span; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double axis_y = kTop + lanes * (kLane + kGap) + 4.0;
  out << "<line x1=\"" << fixed(kLabelWidth, 1) << "\" y1=\"" << fixed(axis_y, 1) << "\" x2=\""
      << fixed(kLabelWidth + kPlotWidth, 1) << "\" y2=\"" << fixed(axis_y, 1) << "\" stroke=\"black\"/>\n";
  const Micros tick = 300 * kMicrosPerSecond;
  for (Micros t = t0; t <= report.trip_span.end; t += tick) {
    const double x = x_of(t);
    out << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(kTop - 4.0, 1) << "\" x2=\"" << fixed(x, 1)
        << "\" y2=\"" << fixed(axis_y + 4.0, 1) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(axis_y + 16.0, 1) << "\" text-anchor=\"middle\">"
        << (t - t0) / (60 * kMicrosPerSecond) << " min</text>\n";
  }

  auto lane_y = [&](std::size_t lane) { return kTop + lane * (kLane + kGap); };
  auto box = [&](std::size_t lane, const Interval& span_us, const char* fill) {
    const double x = x_of(span_us.begin);
    const double w = std::max(1.0, x_of(span_us.end) - x);
    out << "<rect x=\"" << fixed(x, 2) << "\" y=\"" << fixed(lane_y(lane), 1) << "\" width=\"" << fixed(w, 2)
        << "\" height=\"" << fixed(kLane, 1) << "\" fill=\"" << fill << "\"/>\n";
  };
  auto label = [&](std::size_t lane, const std::string& text) {
    out << "<text x=\"4\" y=\"" << fixed(lane_y(lane) + kLane - 3.0, 1) << "\">" << xml_escape(text) << "</text>\n";
  };

  label(0, "ground truth");
  for (const AnnotationInterval& a : report.annotations) box(0, a.span, "#1f4e9c");
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ExperimentResult& row = report.rows[i];
    label(i + 1, row.ok ? row.id : row.id + " (failed)");
    const std::vector<bool> hit = overlap_flags(row.detections, report.annotations);
    for (std::size_t k = 0; k < row.detections.size(); ++k) {
      box(i + 1, row.detections[k].span, hit[k] ? "#2e8b3a" : "#c62828");
    }
  }
  out << "</svg>\n";
  return out.str();
}

void emit_report(const GridReport& report, const std::filesystem::path& out_dir) {
  if (report.rows.empty()) throw Error(ErrorKind::invalid_argument, "empty report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "results.csv", results_csv(report));
  write_file(out_dir / "timeline.svg", timeline_svg(report));
}

}  // namespace sfcmd
