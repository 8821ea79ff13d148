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

#include "sfcmd/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sfcmd/error.hpp"
#include "sfcmd/report.hpp"

namespace sfcmd {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.emplace_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Rows of a headed CSV, keyed by column name.
std::vector<std::map<std::string, std::string>> read_table(std::string_view text,
                                                           std::span<const std::string_view> required) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line);
    if (header.empty()) {
      header = std::move(fields);
      for (std::string_view col : required) {
        if (std::find(header.begin(), header.end(), col) == header.end()) {
          throw Error(ErrorKind::parse, "missing column " + std::string(col));
        }
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields");
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw Error(ErrorKind::parse, "missing header");
  return rows;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "not a number: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "not an integer: '" + s + "'");
  }
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

void apply_detector(const json& j, DetectorParams& p) {
  if (j.contains("window_s") && !j["window_s"].is_null()) p.window_s = j["window_s"].get<double>();
  p.stride_s = j.value("stride_s", p.stride_s);
  p.coverage_min = j.value("coverage_min", p.coverage_min);
  p.distribution_min = j.value("distribution_min", p.distribution_min);
  p.merge_gap_s = j.value("merge_gap_s", p.merge_gap_s);
  p.validate();
}

void apply_normalization(const json& j, NormalizationSpec& spec) {
  for (const auto& [name, range] : j.items()) {
    spec.bounds[parse_signal(name)] = {range.at(0).get<double>(), range.at(1).get<double>()};
  }
  spec.validate();
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

std::string model_to_json(const ModelFile& file) {
  const CspModel& m = file.model;
  json j;
  j["kind"] = std::string(to_string(m.kind));
  j["dims"] = m.grid.dims();
  j["bits"] = m.grid.bits();
  json ranges = json::array();
  for (const ValueRange& r : m.grid.ranges()) ranges.push_back({r.min, r.max});
  j["ranges"] = ranges;
  json stripes = json::array();
  for (const Stripe& s : m.stripes) stripes.push_back({s.lo, s.hi, s.weight});
  j["stripes"] = stripes;
  j["reference_duration_s"] = m.reference_duration_s();
  if (!file.signals.empty()) {
    json names = json::array();
    for (Signal s : file.signals) names.push_back(std::string(signal_info(s).csv_name));
    j["signals"] = names;
  }
  if (file.frequency_hz) j["frequency_hz"] = *file.frequency_hz;
  if (file.normalized) j["normalized"] = *file.normalized;
  return j.dump(2) + "\n";
}

ModelFile model_from_json(std::string_view text) {
  const json j = parse_json(text, "model");
  return guarded("model", [&] {
    ModelFile file;
    CspModel& m = file.model;
    m.kind = parse_curve_kind(j.at("kind").get<std::string>());
    const auto dims = j.at("dims").get<std::size_t>();
    const auto bits = j.at("bits").get<unsigned>();
    std::vector<ValueRange> ranges;
    if (j.contains("ranges")) {
      for (const json& r : j["ranges"]) ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
      if (ranges.size() != dims) throw Error(ErrorKind::dimension_mismatch, "model ranges do not match dims");
    } else {
      ranges.assign(dims, ValueRange{0.0, 1.0});
    }
    m.grid = GridSpec(std::move(ranges), bits);
    for (const json& s : j.at("stripes")) {
      m.stripes.push_back({s.at(0).get<std::uint64_t>(), s.at(1).get<std::uint64_t>(), s.at(2).get<double>()});
    }
    m.reference_duration_us = from_seconds(j.at("reference_duration_s").get<double>());
    if (j.contains("signals")) {
      for (const json& s : j["signals"]) file.signals.push_back(parse_signal(s.get<std::string>()));
      if (file.signals.size() != dims) throw Error(ErrorKind::dimension_mismatch, "model signals do not match dims");
    }
    if (j.contains("frequency_hz")) file.frequency_hz = j["frequency_hz"].get<int>();
    if (j.contains("normalized")) file.normalized = j["normalized"].get<bool>();
    m.validate();
    return file;
  });
}

std::string fences_to_json(std::span<const Geofence> fences) {
  json j = json::array();
  for (const Geofence& f : fences) {
    json poly = json::array();
    for (const LatLon& p : f.polygon()) poly.push_back({p.lat, p.lon});
    j.push_back({{"id", f.id()}, {"polygon", poly}});
  }
  return j.dump(2) + "\n";
}

std::vector<Geofence> fences_from_json(std::string_view text) {
  const json j = parse_json(text, "fences");
  return guarded("fences", [&] {
    std::vector<Geofence> out;
    for (const json& f : j) {
      std::vector<LatLon> poly;
      for (const json& p : f.at("polygon")) poly.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      out.emplace_back(f.at("id").get<std::string>(), std::move(poly));
    }
    return out;
  });
}

std::string annotations_to_csv(std::span<const AnnotationInterval> annotations) {
  std::ostringstream out;
  out << "pass_id,roundabout_id,t_enter_s,t_exit_s,exits_total,exit_taken\n";
  for (const AnnotationInterval& a : annotations) {
    out << a.pass_id << ',' << a.roundabout_id << ',' << format_seconds(a.span.begin) << ','
        << format_seconds(a.span.end) << ',' << a.exits_total << ',' << a.exit_taken << '\n';
  }
  return out.str();
}

std::vector<AnnotationInterval> annotations_from_csv(std::string_view text) {
  static constexpr std::string_view kCols[] = {"pass_id", "roundabout_id", "t_enter_s", "t_exit_s",
                                               "exits_total", "exit_taken"};
  std::vector<AnnotationInterval> out;
  for (auto& row : read_table(text, kCols)) {
    AnnotationInterval a;
    a.pass_id = to_int(row["pass_id"]);
    a.roundabout_id = row["roundabout_id"];
    a.span = {from_seconds(to_double(row["t_enter_s"])), from_seconds(to_double(row["t_exit_s"]))};
    a.exits_total = to_int(row["exits_total"]);
    a.exit_taken = to_int(row["exit_taken"]);
    a.validate();
    out.push_back(std::move(a));
  }
  return out;
}

std::string detections_to_csv(std::span<const DetectionInterval> detections) {
  std::ostringstream out;
  out << "source,t_begin_s,t_end_s\n";
  for (const DetectionInterval& d : detections) {
    out << d.source << ',' << format_seconds(d.span.begin) << ',' << format_seconds(d.span.end) << '\n';
  }
  return out.str();
}

std::vector<DetectionInterval> detections_from_csv(std::string_view text) {
  static constexpr std::string_view kCols[] = {"t_begin_s", "t_end_s"};
  std::vector<DetectionInterval> out;
  for (auto& row : read_table(text, kCols)) {
    DetectionInterval d;
    d.span = {from_seconds(to_double(row["t_begin_s"])), from_seconds(to_double(row["t_end_s"]))};
    if (!(d.span.begin < d.span.end)) throw Error(ErrorKind::parse, "detection needs t_begin_s < t_end_s");
    d.source = row.count("source") ? row["source"] : std::string("detections");
    out.push_back(std::move(d));
  }
  return out;
}

NormalizationSpec normalization_from_json(std::string_view text) {
  const json j = parse_json(text, "normalization");
  return guarded("normalization", [&] {
    NormalizationSpec spec = NormalizationSpec::defaults();
    apply_normalization(j, spec);
    return spec;
  });
}

DetectorParams detector_from_json(std::string_view text) {
  const json j = parse_json(text, "detector");
  return guarded("detector", [&] {
    DetectorParams p;
    apply_detector(j, p);
    return p;
  });
}

GridConfig grid_config_from_json(std::string_view text) {
  const json j = parse_json(text, "grid config");
  return guarded("grid config", [&] {
    GridConfig c;
    if (j.contains("frequencies")) c.request.frequencies = j["frequencies"].get<std::vector<int>>();
    if (j.contains("signals_pool")) {
      c.request.signals_pool.clear();
      for (const json& s : j["signals_pool"]) c.request.signals_pool.push_back(parse_signal(s.get<std::string>()));
    }
    if (j.contains("kinds")) {
      c.request.kinds.clear();
      for (const json& k : j["kinds"]) c.request.kinds.push_back(parse_curve_kind(k.get<std::string>()));
    }
    if (j.contains("normalized")) c.request.normalized = j["normalized"].get<std::vector<bool>>();
    if (j.contains("detector")) apply_detector(j["detector"], c.request.detector);
    c.settings.reference_pass_id = j.value("reference_pass_id", c.settings.reference_pass_id);
    c.settings.bits = j.value("bits", c.settings.bits);
    c.settings.min_weight = j.value("min_weight", c.settings.min_weight);
    if (j.contains("normalization")) apply_normalization(j["normalization"], c.settings.normalization);
    return c;
  });
}

}  // namespace sfcmd
