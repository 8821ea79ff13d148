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

#include "sfcmd/csp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sfcmd/error.hpp"

namespace sfcmd {

CodeStream CodeStream::slice(const Interval& window) const {
  auto index_of = [&](Micros t) -> std::size_t {
    if (t <= start_us) return 0;
    const auto idx = static_cast<std::size_t>((t - start_us + step_us - 1) / step_us);
    return std::min(idx, codes.size());
  };
  const std::size_t lo = index_of(window.begin);
  const std::size_t hi = std::max(lo, index_of(window.end));
  CodeStream out{kind, grid, timestamp(lo), step_us, {}};
  out.codes.assign(codes.begin() + static_cast<std::ptrdiff_t>(lo), codes.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

CodeStream encode_series(const TimeSeries& series, CurveKind kind, const GridSpec& grid) {
  const auto channels = series.channels();
  const std::size_t n = grid.dims();
  if (channels.size() != n) {
    throw Error(ErrorKind::dimension_mismatch,
                "series has " + std::to_string(channels.size()) + " channels but the grid has " +
                    std::to_string(n) + " dimensions");
  }
  CodeStream out{kind, grid, series.start_us(), series.step_us(), {}};
  out.codes.resize(series.size());
  std::array<std::uint32_t, GridSpec::kMaxTotalBits> cells{};
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t d = 0; d < n; ++d) {
      cells[d] = quantize_axis(channels[d].samples[i], grid.range(d), grid.bits());
    }
    out.codes[i] = kind == CurveKind::morton ? detail::morton_interleave(cells.data(), n, grid.bits())
                                             : detail::hilbert_index(cells.data(), n, grid.bits());
  }
  return out;
}

int CspModel::stripe_of(std::uint64_t code) const noexcept {
  auto it = std::upper_bound(stripes.begin(), stripes.end(), code,
                             [](std::uint64_t c, const Stripe& s) { return c < s.lo; });
  if (it == stripes.begin()) return -1;
  --it;
  return code <= it->hi ? static_cast<int>(it - stripes.begin()) : -1;
}

void CspModel::validate() const {
  if (stripes.empty()) throw Error(ErrorKind::calibration, "model has no stripes");
  if (reference_duration_us <= 0) throw Error(ErrorKind::calibration, "reference duration must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < stripes.size(); ++i) {
    const auto& s = stripes[i];
    if (s.lo > s.hi || s.hi >= grid.code_count()) throw Error(ErrorKind::calibration, "malformed stripe");
    if (i > 0 && s.lo <= stripes[i - 1].hi) throw Error(ErrorKind::calibration, "stripes overlap or are unsorted");
    if (!(s.weight > 0.0)) throw Error(ErrorKind::calibration, "stripe weight must be positive");
    sum += s.weight;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw Error(ErrorKind::calibration, "stripe weights must sum to 1");
}

CspModel calibrate(const CodeStream& reference, double min_weight) {
  if (reference.codes.empty()) throw Error(ErrorKind::calibration, "empty reference stream");
  if (!(min_weight >= 0.0 && min_weight < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "min_weight must be in [0, 1)");
  }
  std::vector<std::uint64_t> sorted = reference.codes;
  std::sort(sorted.begin(), sorted.end());

  struct Run {
    std::uint64_t lo, hi;
    std::size_t count;
  };
  std::vector<Run> runs;
  for (const auto c : sorted) {
    if (!runs.empty() && (c == runs.back().hi || c == runs.back().hi + 1)) {
      runs.back().hi = c;
      ++runs.back().count;
    } else {
      runs.push_back({c, c, 1});
    }
  }

  const double total = static_cast<double>(sorted.size());
  CspModel model;
  model.grid = reference.grid;
  model.kind = reference.kind;
  model.reference_duration_us = static_cast<Micros>(reference.codes.size()) * reference.step_us;
  std::size_t kept = 0;
  for (const auto& r : runs) {
    if (static_cast<double>(r.count) / total >= min_weight) kept += r.count;
  }
  if (kept == 0) throw Error(ErrorKind::calibration, "all stripes fall below min_weight");
  for (const auto& r : runs) {
    if (static_cast<double>(r.count) / total >= min_weight) {
      model.stripes.push_back({r.lo, r.hi, static_cast<double>(r.count) / static_cast<double>(kept)});
    }
  }
  return model;
}

void DetectorParams::validate() const {
  if (window_s && !(*window_s > 0.0)) throw Error(ErrorKind::invalid_argument, "window_s must be positive");
  if (!(stride_s > 0.0)) throw Error(ErrorKind::invalid_argument, "stride_s must be positive");
  if (!(coverage_min > 0.0 && coverage_min <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "coverage_min must be in (0, 1]");
  }
  if (!(distribution_min >= 0.0 && distribution_min <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "distribution_min must be in [0, 1]");
  }
  if (!(merge_gap_s >= 0.0)) throw Error(ErrorKind::invalid_argument, "merge_gap_s must be non-negative");
}

double histogram_intersection(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  const std::size_t n = std::min(p.size(), q.size());
  for (std::size_t i = 0; i < n; ++i) s += std::min(p[i], q[i]);
  return s;
}

std::vector<WindowScore> score_windows(const CodeStream& stream, const CspModel& model,
                                       const DetectorParams& params) {
  params.validate();
  model.validate();
  if (stream.kind != model.kind || !(stream.grid == model.grid)) {
    throw Error(ErrorKind::model_mismatch, "code stream and model use different curves or grids");
  }
  const Micros window_us = params.window_s ? from_seconds(*params.window_s) : model.reference_duration_us;
  const auto window = static_cast<std::size_t>(
      std::max<Micros>(1, (window_us + stream.step_us / 2) / stream.step_us));
  const auto stride = static_cast<std::size_t>(
      std::max<Micros>(1, (from_seconds(params.stride_s) + stream.step_us / 2) / stream.step_us));

  std::vector<WindowScore> scores;
  const std::size_t n = stream.size();
  if (n < window) return scores;

  std::vector<int> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = model.stripe_of(stream.codes[i]);

  const std::size_t k = model.stripes.size();
  std::vector<double> reference(k);
  for (std::size_t s = 0; s < k; ++s) reference[s] = model.stripes[s].weight;

  std::vector<std::size_t> counts(k, 0);
  std::size_t inside = 0;
  auto add = [&](std::size_t i) {
    if (slot[i] < 0) return;
    ++counts[static_cast<std::size_t>(slot[i])];
    ++inside;
  };
  auto remove = [&](std::size_t i) {
    if (slot[i] < 0) return;
    --counts[static_cast<std::size_t>(slot[i])];
    --inside;
  };
  for (std::size_t i = 0; i < window; ++i) add(i);

  std::vector<double> occupancy(k);
  for (std::size_t start = 0;; start += stride) {
    WindowScore w;
    w.first_sample = start;
    w.coverage = static_cast<double>(inside) / static_cast<double>(window);
    if (inside > 0) {
      for (std::size_t s = 0; s < k; ++s) {
        occupancy[s] = static_cast<double>(counts[s]) / static_cast<double>(inside);
      }
      w.similarity = histogram_intersection(occupancy, reference);
    }
    w.positive = w.coverage >= params.coverage_min && w.similarity >= params.distribution_min;
    scores.push_back(w);

    const std::size_t next = start + stride;
    if (next + window > n) break;
    if (stride < window) {
      for (std::size_t i = start; i < next; ++i) remove(i);
      for (std::size_t i = start + window; i < next + window; ++i) add(i);
    } else {
      std::fill(counts.begin(), counts.end(), 0);
      inside = 0;
      for (std::size_t i = next; i < next + window; ++i) add(i);
    }
  }
  return scores;
}

std::vector<DetectionInterval> detect(const CodeStream& stream, const CspModel& model,
                                      const DetectorParams& params, const std::string& label) {
  const auto scores = score_windows(stream, model, params);
  const Micros window_us = params.window_s ? from_seconds(*params.window_s) : model.reference_duration_us;
  const Micros window_len =
      std::max<Micros>(1, (window_us + stream.step_us / 2) / stream.step_us) * stream.step_us;
  const Micros merge_gap = from_seconds(params.merge_gap_s);

  std::vector<DetectionInterval> out;
  for (const auto& w : scores) {
    if (!w.positive) continue;
    const Interval span{stream.timestamp(w.first_sample), stream.timestamp(w.first_sample) + window_len};
    if (!out.empty() && span.begin - out.back().span.end <= merge_gap) {
      out.back().span.end = std::max(out.back().span.end, span.end);
    } else {
      out.push_back({span, label});
    }
  }
  return out;
}

}  // namespace sfcmd
