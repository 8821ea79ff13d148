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

#include "sfcmd/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

constexpr std::array<bool, 5> kAll{true, true, true, true, true};

// Availability columns: 5, 10, 20, 50, 100 Hz.
const std::array<SignalInfo, kSignalCount> kCatalog{{
    {Signal::accel_lat, "accel_lat", "ax", "m/s^2", kAll, {-16.0, 16.0}},
    {Signal::accel_lon, "accel_lon", "ay", "m/s^2", kAll, {-16.0, 16.0}},
    {Signal::accel_vert, "accel_vert", "az", "m/s^2", kAll, {-16.0, 16.0}},
    {Signal::speed, "speed", "v", "m/s", kAll, {0.0, 60.0}},
    {Signal::steering_angle, "steering_angle", "steer", "rad", {true, true, false, true, false}, {-10.0, 10.0}},
    {Signal::yaw_rate, "yaw_rate", "yaw", "rad/s", kAll, {-2.0, 2.0}},
    {Signal::pitch_rate, "pitch_rate", "pitch", "rad/s", kAll, {-2.0, 2.0}},
    {Signal::roll_rate, "roll_rate", "roll", "rad/s", kAll, {-2.0, 2.0}},
    {Signal::heading, "heading", "heading", "rad", {true, true, true, false, false}, {0.0, 2.0 * std::numbers::pi}},
    {Signal::gps_lat, "gps_lat", "lat", "deg", {false, false, true, false, false}, {-90.0, 90.0}},
    {Signal::gps_lon, "gps_lon", "lon", "deg", {false, false, true, false, false}, {-180.0, 180.0}},
}};

// Remaining signals, alphabetical by CSV name.
constexpr std::array<Signal, 7> kCanonicalTail{Signal::accel_vert, Signal::gps_lat,    Signal::gps_lon,
                                               Signal::heading,    Signal::pitch_rate, Signal::roll_rate,
                                               Signal::speed};

int frequency_slot(int hz) {
  for (std::size_t i = 0; i < kSupportedFrequencies.size(); ++i) {
    if (kSupportedFrequencies[i] == hz) return static_cast<int>(i);
  }
  return -1;
}

void require_frequency(int hz) {
  if (!is_supported_frequency(hz)) {
    throw Error(ErrorKind::invalid_argument,
                "unsupported frequency " + std::to_string(hz) + " Hz (expected 5, 10, 20, 50 or 100)");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(',', pos);
    out.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": cannot parse '" +
                                      std::string(field) + "' as a number");
  }
  return v;
}

Micros parse_timestamp(std::string_view field, std::size_t line_no) {
  Micros v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec == std::errc{} && ptr == field.data() + field.size() && !field.empty()) return v;
  const double d = parse_double(field, line_no);
  if (!std::isfinite(d)) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": non-finite timestamp");
  }
  return std::llround(d);
}

}  // namespace

std::span<const SignalInfo> signal_catalog() { return kCatalog; }

const SignalInfo& signal_info(Signal s) { return kCatalog[static_cast<std::size_t>(s)]; }

std::optional<Signal> signal_from_csv_name(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.csv_name == name) return info.signal;
  }
  return std::nullopt;
}

Signal parse_signal(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.csv_name == name || info.short_name == name) return info.signal;
  }
  throw Error(ErrorKind::invalid_argument, "unknown signal '" + std::string(name) + "'");
}

bool is_supported_frequency(int hz) { return frequency_slot(hz) >= 0; }

bool available_at(Signal s, int hz) {
  const int slot = frequency_slot(hz);
  return slot >= 0 && signal_info(s).available[static_cast<std::size_t>(slot)];
}

int canonical_rank(Signal s) {
  switch (s) {
    case Signal::accel_lat: return 0;
    case Signal::accel_lon: return 1;
    case Signal::steering_angle: return 2;
    case Signal::yaw_rate: return 3;
    default: break;
  }
  const auto it = std::find(kCanonicalTail.begin(), kCanonicalTail.end(), s);
  return 4 + static_cast<int>(it - kCanonicalTail.begin());
}

std::vector<Signal> canonical_order(std::vector<Signal> signals) {
  std::sort(signals.begin(), signals.end(),
            [](Signal a, Signal b) { return canonical_rank(a) < canonical_rank(b); });
  signals.erase(std::unique(signals.begin(), signals.end()), signals.end());
  return signals;
}

TimeSeries::TimeSeries(int frequency_hz, Micros start_us, std::size_t size)
    : frequency_hz_(frequency_hz), start_us_(start_us), size_(size) {
  require_frequency(frequency_hz);
}

void TimeSeries::set_channel(Signal s, std::vector<double> samples) {
  if (samples.size() != size_) {
    throw Error(ErrorKind::dimension_mismatch,
                std::string("channel ") + std::string(signal_info(s).csv_name) + " has " +
                    std::to_string(samples.size()) + " samples, series has " + std::to_string(size_));
  }
  auto it = std::find_if(channels_.begin(), channels_.end(),
                         [&](const Channel& c) { return canonical_rank(c.signal) >= canonical_rank(s); });
  if (it != channels_.end() && it->signal == s) {
    it->samples = std::move(samples);
    return;
  }
  channels_.insert(it, Channel{s, std::move(samples)});
}

bool TimeSeries::has(Signal s) const noexcept {
  return std::any_of(channels_.begin(), channels_.end(), [&](const Channel& c) { return c.signal == s; });
}

std::span<const double> TimeSeries::channel(Signal s) const {
  for (const auto& c : channels_) {
    if (c.signal == s) return c.samples;
  }
  throw Error(ErrorKind::missing_channel,
              "series has no channel " + std::string(signal_info(s).csv_name));
}

std::vector<Signal> TimeSeries::signals() const {
  std::vector<Signal> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) out.push_back(c.signal);
  return out;
}

std::size_t TimeSeries::index_at_or_after(Micros t) const noexcept {
  if (t <= start_us_) return 0;
  const Micros step = step_us();
  const auto idx = static_cast<std::size_t>((t - start_us_ + step - 1) / step);
  return std::min(idx, size_);
}

TimeSeries TimeSeries::slice(const Interval& window) const {
  const std::size_t lo = index_at_or_after(window.begin);
  const std::size_t hi = std::max(lo, index_at_or_after(window.end));
  TimeSeries out(frequency_hz_, timestamp(lo), hi - lo);
  for (const auto& c : channels_) {
    const auto first = c.samples.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last = c.samples.begin() + static_cast<std::ptrdiff_t>(hi);
    out.channels_.push_back(Channel{c.signal, std::vector<double>(first, last)});
  }
  return out;
}

CsvLoadResult parse_csv(std::string_view text, int declared_frequency) {
  require_frequency(declared_frequency);
  CsvLoadResult result;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      line = trim(text.substr(pos, nl == std::string_view::npos ? nl : nl - pos));
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string_view header;
  if (!next_line(header)) throw Error(ErrorKind::empty_series, "empty series: no header row");
  if (header.size() >= 3 && static_cast<unsigned char>(header.front()) == 0xEF) {
    header.remove_prefix(3);  // UTF-8 BOM
  }
  const auto names = split_commas(header);

  int ts_col = -1;
  std::vector<std::pair<std::size_t, Signal>> columns;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "timestamp_us") {
      ts_col = static_cast<int>(i);
    } else if (const auto s = signal_from_csv_name(names[i])) {
      columns.emplace_back(i, *s);
    } else {
      result.warnings.push_back("ignoring unknown column '" + std::string(names[i]) + "'");
    }
  }
  if (ts_col < 0) throw Error(ErrorKind::parse, "missing timestamp column 'timestamp_us'");

  std::vector<Micros> stamps;
  std::vector<std::vector<double>> values(columns.size());
  std::string_view line;
  while (next_line(line)) {
    const auto fields = split_commas(line);
    if (fields.size() != names.size()) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(names.size()) + " fields, found " +
                                        std::to_string(fields.size()));
    }
    stamps.push_back(parse_timestamp(fields[static_cast<std::size_t>(ts_col)], line_no));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      values[c].push_back(parse_double(fields[columns[c].first], line_no));
    }
  }
  if (stamps.empty()) throw Error(ErrorKind::empty_series, "empty series");

  const Micros step = kMicrosPerSecond / declared_frequency;
  for (std::size_t i = 1; i < stamps.size(); ++i) {
    const Micros dt = stamps[i] - stamps[i - 1];
    if (dt <= 0) {
      throw Error(ErrorKind::non_monotone_timestamps,
                  "non-monotone timestamps at data row " + std::to_string(i + 1));
    }
    if (std::llabs(dt - step) * 100 > step) {
      throw Error(ErrorKind::frequency_mismatch,
                  "sample spacing " + std::to_string(dt) + " us deviates more than 1% from " +
                      std::to_string(step) + " us");
    }
  }

  TimeSeries series(declared_frequency, stamps.front(), stamps.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    series.set_channel(columns[c].second, std::move(values[c]));
  }
  result.series = std::move(series);
  return result;
}

CsvLoadResult load_csv(const std::filesystem::path& path, int declared_frequency) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), declared_frequency);
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << "timestamp_us";
  for (const auto& c : series.channels()) out << ',' << signal_info(c.signal).csv_name;
  out << '\n';
  char buf[64];
  std::string row;
  for (std::size_t i = 0; i < series.size(); ++i) {
    row = std::to_string(series.timestamp(i));
    for (const auto& c : series.channels()) {
      std::snprintf(buf, sizeof buf, ",%.10g", c.samples[i]);
      row += buf;
    }
    row += '\n';
    out << row;
  }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

TimeSeries downsample(const TimeSeries& series, int target_hz) {
  require_frequency(target_hz);
  if (target_hz > series.frequency() || series.frequency() % target_hz != 0) {
    throw Error(ErrorKind::invalid_argument,
                std::to_string(target_hz) + " Hz does not divide " + std::to_string(series.frequency()) + " Hz");
  }
  const std::size_t stride = static_cast<std::size_t>(series.frequency() / target_hz);
  const std::size_t n = (series.size() + stride - 1) / stride;
  TimeSeries out(target_hz, series.start_us(), n);
  for (const auto& c : series.channels()) {
    std::vector<double> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < series.size(); i += stride) kept.push_back(c.samples[i]);
    out.set_channel(c.signal, std::move(kept));
  }
  return out;
}

void NormalizationSpec::validate() const {
  if (mode == NormalizationMode::none) return;
  for (const auto& [signal, r] : bounds) {
    if (!(r.min < r.max)) {
      throw Error(ErrorKind::invalid_argument,
                  "normalization bounds for " + std::string(signal_info(signal).csv_name) + " need min < max");
    }
  }
}

NormalizationSpec NormalizationSpec::defaults() {
  NormalizationSpec spec;
  spec.mode = NormalizationMode::min_max;
  spec.bounds = {
      {Signal::accel_lat, {-6.0, 6.0}},      {Signal::accel_lon, {-6.0, 6.0}},
      {Signal::accel_vert, {-6.0, 6.0}},     {Signal::speed, {0.0, 30.0}},
      {Signal::steering_angle, {-8.0, 8.0}}, {Signal::yaw_rate, {-1.2, 1.2}},
      {Signal::pitch_rate, {-0.5, 0.5}},     {Signal::roll_rate, {-0.5, 0.5}},
      {Signal::heading, {0.0, 2.0 * std::numbers::pi}},
      {Signal::gps_lat, {-90.0, 90.0}},      {Signal::gps_lon, {-180.0, 180.0}},
  };
  return spec;
}

TimeSeries normalize(const TimeSeries& series, const NormalizationSpec& spec) {
  if (spec.mode == NormalizationMode::none) return series;
  spec.validate();
  TimeSeries out(series.frequency(), series.start_us(), series.size());
  for (const auto& c : series.channels()) {
    const auto it = spec.bounds.find(c.signal);
    if (it == spec.bounds.end()) {
      throw Error(ErrorKind::invalid_argument,
                  "no normalization bounds for channel " + std::string(signal_info(c.signal).csv_name));
    }
    const ValueRange r = it->second;
    std::vector<double> scaled(c.samples.size());
    std::transform(c.samples.begin(), c.samples.end(), scaled.begin(), [r](double v) {
      return std::clamp((v - r.min) / (r.max - r.min), 0.0, 1.0);
    });
    out.set_channel(c.signal, std::move(scaled));
  }
  return out;
}

TimeSeries project(const TimeSeries& series, std::span<const Signal> subset) {
  const auto wanted = canonical_order({subset.begin(), subset.end()});
  if (wanted.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "minimum two signals required for a projection");
  }
  TimeSeries out(series.frequency(), series.start_us(), series.size());
  for (const Signal s : wanted) {
    if (!available_at(s, series.frequency())) {
      throw Error(ErrorKind::unavailable_signal,
                  std::string(signal_info(s).csv_name) + " is not available at " +
                      std::to_string(series.frequency()) + " Hz");
    }
    const auto samples = series.channel(s);
    out.set_channel(s, {samples.begin(), samples.end()});
  }
  return out;
}

}  // namespace sfcmd
