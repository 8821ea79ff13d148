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

#include "sfcmd/evaluation.hpp"

#include <algorithm>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

double ratio(Micros num, Micros den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

void require_inside(const Interval& i, const Interval& trip, const char* what) {
  if (i.begin < trip.begin || i.end > trip.end) {
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + " interval [" + std::to_string(i.begin) + ", " + std::to_string(i.end) +
                    ") lies outside the trip span");
  }
}

}  // namespace

double iou(const Interval& a, const Interval& b) noexcept {
  const Micros inter = overlap_length(a, b);
  const Micros uni = a.length() + b.length() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

std::vector<bool> overlap_flags(std::span<const DetectionInterval> detections,
                                std::span<const AnnotationInterval> annotations) {
  std::vector<bool> flags(detections.size(), false);
  for (std::size_t i = 0; i < detections.size(); ++i) {
    for (const auto& a : annotations) {
      if (iou(detections[i].span, a.span) > 0.0) {
        flags[i] = true;
        break;
      }
    }
  }
  return flags;
}

std::vector<int> pass_hit_counts(std::span<const DetectionInterval> detections,
                                 std::span<const AnnotationInterval> annotations) {
  std::vector<int> counts(annotations.size(), 0);
  for (std::size_t j = 0; j < annotations.size(); ++j) {
    for (const auto& d : detections) {
      if (iou(d.span, annotations[j].span) > 0.0) ++counts[j];
    }
  }
  return counts;
}

BooleanScore boolean_score(std::span<const DetectionInterval> detections,
                           std::span<const AnnotationInterval> annotations) {
  BooleanScore s;
  s.guesses = static_cast<int>(detections.size());
  for (const bool hit : overlap_flags(detections, annotations)) s.hits += hit ? 1 : 0;
  for (const int c : pass_hit_counts(detections, annotations)) s.tp_passes += c > 0 ? 1 : 0;
  return s;
}

TimeScore time_score(std::span<const DetectionInterval> detections,
                     std::span<const AnnotationInterval> annotations, const Interval& trip_span) {
  std::vector<Interval> det;
  det.reserve(detections.size());
  for (const auto& d : detections) {
    require_inside(d.span, trip_span, "detection");
    det.push_back(d.span);
  }
  std::vector<Interval> truth;
  truth.reserve(annotations.size());
  for (const auto& a : annotations) {
    require_inside(a.span, trip_span, "annotation");
    truth.push_back(a.span);
  }
  det = interval_union(std::move(det));
  truth = interval_union(std::move(truth));

  TimeScore s;
  const Micros detected = total_length(det);
  const Micros annotated = total_length(truth);
  s.tp_us = intersection_length(det, truth);
  s.fp_us = detected - s.tp_us;
  s.fn_us = annotated - s.tp_us;
  s.tn_us = trip_span.length() - s.tp_us - s.fp_us - s.fn_us;
  s.precision = ratio(s.tp_us, s.tp_us + s.fp_us);
  s.recall = ratio(s.tp_us, s.tp_us + s.fn_us);
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

MetricsReport score(std::span<const DetectionInterval> detections,
                    std::span<const AnnotationInterval> annotations, const Interval& trip_span) {
  return {boolean_score(detections, annotations), time_score(detections, annotations, trip_span)};
}

bool ranks_before(const std::string& id_a, const MetricsReport& a, const std::string& id_b,
                  const MetricsReport& b) {
  if (a.time.f1 != b.time.f1) return a.time.f1 > b.time.f1;
  if (a.boolean.tp_passes != b.boolean.tp_passes) return a.boolean.tp_passes > b.boolean.tp_passes;
  return id_a < id_b;
}

std::vector<std::pair<std::string, MetricsReport>> rank(std::vector<std::pair<std::string, MetricsReport>> reports) {
  std::sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) {
    return ranks_before(x.first, x.second, y.first, y.second);
  });
  return reports;
}

}  // namespace sfcmd
