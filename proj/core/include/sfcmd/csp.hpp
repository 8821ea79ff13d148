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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfcmd/interval.hpp"
#include "sfcmd/sfc.hpp"
#include "sfcmd/timeseries.hpp"

namespace sfcmd {

/// One SFC code per sample of a projected series. Sample i sits at
/// start_us + i * step_us.
struct CodeStream {
  CurveKind kind = CurveKind::hilbert;
  GridSpec grid = GridSpec::uniform(2, 4, {0.0, 1.0});
  Micros start_us = 0;
  Micros step_us = 100'000;
  std::vector<std::uint64_t> codes;

  std::size_t size() const noexcept { return codes.size(); }
  Micros timestamp(std::size_t i) const noexcept { return start_us + static_cast<Micros>(i) * step_us; }
  Interval span() const noexcept { return {start_us, start_us + static_cast<Micros>(codes.size()) * step_us}; }
  /// Sub-stream of the samples with timestamp in [window.begin, window.end).
  CodeStream slice(const Interval& window) const;
};

/// Channel d of `series` is quantized on grid dimension d; the channel count
/// must match grid.dims().
CodeStream encode_series(const TimeSeries& series, CurveKind kind, const GridSpec& grid);

/// A maximal run [lo, hi] of consecutive occupied codes and its share of the
/// calibration samples.
struct Stripe {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double weight = 0.0;
  bool operator==(const Stripe&) const = default;
};

/// Characteristic stripe pattern of a reference maneuver.
struct CspModel {
  GridSpec grid = GridSpec::uniform(2, 4, {0.0, 1.0});
  CurveKind kind = CurveKind::hilbert;
  std::vector<Stripe> stripes;  // sorted, disjoint, weights sum to 1
  Micros reference_duration_us = 0;

  double reference_duration_s() const { return to_seconds(reference_duration_us); }
  /// Index of the stripe containing `code`, or -1.
  int stripe_of(std::uint64_t code) const noexcept;
  void validate() const;
};

/// Histogram the reference codes, fuse adjacent occupied codes into stripes,
/// drop stripes lighter than `min_weight` and renormalize.
CspModel calibrate(const CodeStream& reference, double min_weight = 0.01);

struct DetectorParams {
  std::optional<double> window_s;  // unset: the model's reference duration
  double stride_s = 0.5;
  double coverage_min = 0.8;
  double distribution_min = 0.6;
  double merge_gap_s = 1.0;

  void validate() const;
};

/// Similarity of two occupancy distributions: sum_i min(p_i, q_i).
double histogram_intersection(std::span<const double> p, std::span<const double> q);

struct WindowScore {
  std::size_t first_sample = 0;
  double coverage = 0.0;
  double similarity = 0.0;
  bool positive = false;
};

/// Scores every full window of the stream. Windows start at multiples of the
/// stride (rounded to whole samples, at least one).
std::vector<WindowScore> score_windows(const CodeStream& stream, const CspModel& model,
                                       const DetectorParams& params);

/// Positive windows (coverage >= coverage_min and similarity >=
/// distribution_min) merged when the gap between them is <= merge_gap_s.
std::vector<DetectionInterval> detect(const CodeStream& stream, const CspModel& model,
                                      const DetectorParams& params, const std::string& label = "csp");

}  // namespace sfcmd
