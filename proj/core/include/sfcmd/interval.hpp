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
#include <span>
#include <string>
#include <vector>

namespace sfcmd {

/// Microseconds; every time quantity inside the library uses this unit.
using Micros = std::int64_t;

constexpr Micros kMicrosPerSecond = 1'000'000;

inline double to_seconds(Micros us) { return static_cast<double>(us) / 1e6; }
Micros from_seconds(double s);

/// Half-open time window [begin, end).
struct Interval {
  Micros begin = 0;
  Micros end = 0;

  Micros length() const noexcept { return end > begin ? end - begin : 0; }
  bool empty() const noexcept { return end <= begin; }
  bool operator==(const Interval&) const = default;
};

Micros overlap_length(const Interval& a, const Interval& b) noexcept;

/// Sorted, disjoint union of the inputs. Touching intervals are fused.
std::vector<Interval> interval_union(std::vector<Interval> intervals);
Micros total_length(std::span<const Interval> disjoint);
/// Length of the intersection of two sorted disjoint interval sets.
Micros intersection_length(std::span<const Interval> a, std::span<const Interval> b);

/// A detector output window labelled with what produced it (fence id, config id).
struct DetectionInterval {
  Interval span;
  std::string source;
  bool operator==(const DetectionInterval&) const = default;
};

/// One manually annotated roundabout pass. `exit_taken > exits_total` marks
/// passes that circle the roundabout at least once (e.g. 14/4).
struct AnnotationInterval {
  int pass_id = 0;
  std::string roundabout_id;
  Interval span;
  int exits_total = 1;
  int exit_taken = 1;

  void validate() const;
  bool operator==(const AnnotationInterval&) const = default;
};

}  // namespace sfcmd
