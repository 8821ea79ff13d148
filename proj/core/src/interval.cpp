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

#include "sfcmd/interval.hpp"

#include <algorithm>
#include <cmath>

#include "sfcmd/error.hpp"

namespace sfcmd {

Micros from_seconds(double s) {
  if (!std::isfinite(s)) throw Error(ErrorKind::invalid_argument, "non-finite time value");
  return std::llround(s * 1e6);
}

Micros overlap_length(const Interval& a, const Interval& b) noexcept {
  const Micros lo = std::max(a.begin, b.begin);
  const Micros hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

std::vector<Interval> interval_union(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& i) { return i.empty(); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  std::vector<Interval> out;
  for (const auto& i : intervals) {
    if (!out.empty() && i.begin <= out.back().end) {
      out.back().end = std::max(out.back().end, i.end);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

Micros total_length(std::span<const Interval> disjoint) {
  Micros sum = 0;
  for (const auto& i : disjoint) sum += i.length();
  return sum;
}

Micros intersection_length(std::span<const Interval> a, std::span<const Interval> b) {
  Micros sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    sum += overlap_length(a[i], b[j]);
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

void AnnotationInterval::validate() const {
  if (!(span.begin < span.end)) {
    throw Error(ErrorKind::invalid_argument,
                "annotation " + std::to_string(pass_id) + " needs t_enter < t_exit");
  }
  if (exits_total < 1 || exit_taken < 1) {
    throw Error(ErrorKind::invalid_argument,
                "annotation " + std::to_string(pass_id) + " needs exits_total >= 1 and exit_taken >= 1");
  }
}

}  // namespace sfcmd
