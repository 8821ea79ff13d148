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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfcmd/interval.hpp"
#include "sfcmd/sfc.hpp"

namespace sfcmd {

/// Kinematic channels of the recording platform. Names follow the vehicle
/// convention where a_x is the lateral and a_y the longitudinal acceleration.
enum class Signal : std::uint8_t {
  accel_lat,       // a_x, m/s^2, positive to the left
  accel_lon,       // a_y, m/s^2, positive forward
  accel_vert,      // a_z, m/s^2
  speed,           // v, m/s
  steering_angle,  // delta_S, rad (steering wheel)
  yaw_rate,        // rad/s, positive counter-clockwise
  pitch_rate,      // rad/s
  roll_rate,       // rad/s
  heading,         // rad, compass heading in [0, 2pi)
  gps_lat,         // deg
  gps_lon,         // deg
};

inline constexpr std::size_t kSignalCount = 11;

/// Sampling frequencies the logger provides.
inline constexpr std::array<int, 5> kSupportedFrequencies{5, 10, 20, 50, 100};

struct SignalInfo {
  Signal signal;
  std::string_view csv_name;
  std::string_view short_name;  // used in experiment ids
  std::string_view unit;
  std::array<bool, 5> available;  // indexed like kSupportedFrequencies
  ValueRange full_scale;          // sensor range used for un-normalized encoding
};

std::span<const SignalInfo> signal_catalog();
const SignalInfo& signal_info(Signal s);
std::optional<Signal> signal_from_csv_name(std::string_view name);
/// Accepts either the CSV column name or the short name ("ax", "yaw", ...).
Signal parse_signal(std::string_view name);

bool is_supported_frequency(int hz);
bool available_at(Signal s, int hz);

/// Canonical dimension order: a_x, a_y, delta_S, yaw rate, then the remaining
/// signals alphabetically by CSV name. The SFC dimension of a channel is its
/// position in this order within the selected subset.
int canonical_rank(Signal s);
std::vector<Signal> canonical_order(std::vector<Signal> signals);

struct Channel {
  Signal signal;
  std::vector<double> samples;
};

/// Uniformly sampled multi-channel recording. Timestamps are implicit:
/// sample i sits at start_us + i * step_us, where step_us = 1e6 / frequency.
/// Channels are kept in canonical order and all share one length.
///
/// Table-I availability is not enforced here: a 100 Hz capture may carry
/// channels the logger only exposes at lower rates. It is enforced when
/// signals are selected for an experiment (see project()).
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(int frequency_hz, Micros start_us, std::size_t size);

  int frequency() const noexcept { return frequency_hz_; }
  Micros step_us() const noexcept { return kMicrosPerSecond / frequency_hz_; }
  Micros start_us() const noexcept { return start_us_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  Micros timestamp(std::size_t i) const noexcept {
    return start_us_ + static_cast<Micros>(i) * step_us();
  }
  /// [first sample, last sample + one step).
  Interval span() const noexcept { return {start_us_, start_us_ + static_cast<Micros>(size_) * step_us()}; }

  /// Inserts (or replaces) a channel; its length must equal size().
  void set_channel(Signal s, std::vector<double> samples);
  bool has(Signal s) const noexcept;
  std::span<const double> channel(Signal s) const;
  std::span<const Channel> channels() const noexcept { return channels_; }
  std::vector<Signal> signals() const;

  /// Index of the first sample with timestamp >= t (clamped to size()).
  std::size_t index_at_or_after(Micros t) const noexcept;
  /// Samples whose timestamp falls in [window.begin, window.end).
  TimeSeries slice(const Interval& window) const;

 private:
  int frequency_hz_ = 10;
  Micros start_us_ = 0;
  std::size_t size_ = 0;
  std::vector<Channel> channels_;
};

struct CsvLoadResult {
  TimeSeries series;
  std::vector<std::string> warnings;
};

/// Parses `timestamp_us,<signal>...`. Unknown columns are skipped with a
/// warning. Sample spacing may deviate by at most 1% from 1/declared_frequency.
CsvLoadResult load_csv(const std::filesystem::path& path, int declared_frequency);
CsvLoadResult parse_csv(std::string_view text, int declared_frequency);
void write_csv(const TimeSeries& series, const std::filesystem::path& path);

/// Decimation: keeps every (frequency / target_hz)-th sample from index 0.
TimeSeries downsample(const TimeSeries& series, int target_hz);

enum class NormalizationMode { none, min_max };

struct NormalizationSpec {
  NormalizationMode mode = NormalizationMode::none;
  std::map<Signal, ValueRange> bounds;

  void validate() const;
  /// Physical bounds that ship with the toolkit (config/normalization.json).
  static NormalizationSpec defaults();
};

/// min_max maps (v - min) / (max - min) and clamps to [0, 1].
TimeSeries normalize(const TimeSeries& series, const NormalizationSpec& spec);

/// Restricts to `subset` (>= 2 signals, each present and available at the
/// series frequency). The result is in canonical order.
TimeSeries project(const TimeSeries& series, std::span<const Signal> subset);

}  // namespace sfcmd
