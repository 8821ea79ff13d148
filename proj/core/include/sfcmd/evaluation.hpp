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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfcmd/interval.hpp"

namespace sfcmd {

/// |a ∩ b| / |a ∪ b|, 0 when disjoint or both empty.
double iou(const Interval& a, const Interval& b) noexcept;

/// Boolean-identified passes: a detection is a hit ("green") when its IoU with
/// some annotation is > 0, however small the overlap.
struct BooleanScore {
  int tp_passes = 0;   // distinct annotations hit at least once
  int hits = 0;        // detections overlapping ground truth, duplicates included
  int guesses = 0;     // all detections
  int false_positives() const noexcept { return guesses - hits; }
  bool operator==(const BooleanScore&) const = default;
};

/// Time-based confusion counts in microseconds over the trip span.
struct TimeScore {
  Micros tp_us = 0;
  Micros fp_us = 0;
  Micros fn_us = 0;
  Micros tn_us = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool operator==(const TimeScore&) const = default;
};

struct MetricsReport {
  BooleanScore boolean;
  TimeScore time;
  bool operator==(const MetricsReport&) const = default;
};

/// Per detection: true when it overlaps any annotation.
std::vector<bool> overlap_flags(std::span<const DetectionInterval> detections,
                                std::span<const AnnotationInterval> annotations);

/// Per annotation: number of detections overlapping it.
std::vector<int> pass_hit_counts(std::span<const DetectionInterval> detections,
                                 std::span<const AnnotationInterval> annotations);

BooleanScore boolean_score(std::span<const DetectionInterval> detections,
                           std::span<const AnnotationInterval> annotations);

/// Unions are taken before intersecting, so overlapping detections never
/// count a second twice. Throws if an interval leaves `trip_span`.
TimeScore time_score(std::span<const DetectionInterval> detections,
                     std::span<const AnnotationInterval> annotations, const Interval& trip_span);

MetricsReport score(std::span<const DetectionInterval> detections,
                    std::span<const AnnotationInterval> annotations, const Interval& trip_span);

/// Descending time-based F1, then more distinct passes, then config id.
bool ranks_before(const std::string& id_a, const MetricsReport& a, const std::string& id_b,
                  const MetricsReport& b);

std::vector<std::pair<std::string, MetricsReport>> rank(std::vector<std::pair<std::string, MetricsReport>> reports);

}  // namespace sfcmd
