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

namespace sfcmd::synth {

enum class DubinsWord { LSL, RSR, LSR, RSL };

/// Shortest circle-straight-circle path between two planar poses (headings in
/// radians, counter-clockwise from +x). Arc angles are non-negative; the word
/// says which way each arc turns.
struct DubinsPath {
  DubinsWord word = DubinsWord::LSL;
  double first_arc = 0.0;
  double straight = 0.0;
  double second_arc = 0.0;
  double radius = 1.0;

  double length() const noexcept { return radius * (first_arc + second_arc) + straight; }
  bool first_left() const noexcept { return word == DubinsWord::LSL || word == DubinsWord::LSR; }
  bool second_left() const noexcept { return word == DubinsWord::LSL || word == DubinsWord::RSL; }
};

DubinsPath shortest_csc(std::array<double, 3> from, std::array<double, 3> to, double radius);

}  // namespace sfcmd::synth
