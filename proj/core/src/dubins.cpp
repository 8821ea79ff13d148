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

#include "sfcmd/dubins.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sfcmd/error.hpp"

namespace sfcmd::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // Arcs within rounding noise of a full circle are really zero.
  if (kTwoPi - a < 1e-9) a = 0.0;
  return a;
}

struct Point {
  double x, y;
};

Point left_center(const std::array<double, 3>& p, double r) {
  return {p[0] - r * std::sin(p[2]), p[1] + r * std::cos(p[2])};
}

Point right_center(const std::array<double, 3>& p, double r) {
  return {p[0] + r * std::sin(p[2]), p[1] - r * std::cos(p[2])};
}

}  // namespace

DubinsPath shortest_csc(std::array<double, 3> from, std::array<double, 3> to, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "turn radius must be positive");
  DubinsPath best;
  double best_len = std::numeric_limits<double>::infinity();
  auto consider = [&](DubinsPath p) {
    if (p.length() < best_len) {
      best_len = p.length();
      best = p;
    }
  };

  {  // LSL
    const Point c1 = left_center(from, radius);
    const Point c2 = left_center(to, radius);
    const double phi = std::atan2(c2.y - c1.y, c2.x - c1.x);
    const double d = std::hypot(c2.x - c1.x, c2.y - c1.y);
    consider({DubinsWord::LSL, wrap_positive(phi - from[2]), d, wrap_positive(to[2] - phi), radius});
  }
  {  // RSR
    const Point c1 = right_center(from, radius);
    const Point c2 = right_center(to, radius);
    const double phi = std::atan2(c2.y - c1.y, c2.x - c1.x);
    const double d = std::hypot(c2.x - c1.x, c2.y - c1.y);
    consider({DubinsWord::RSR, wrap_positive(from[2] - phi), d, wrap_positive(phi - to[2]), radius});
  }
  {  // LSR
    const Point c1 = left_center(from, radius);
    const Point c2 = right_center(to, radius);
    const double d = std::hypot(c2.x - c1.x, c2.y - c1.y);
    if (d >= 2.0 * radius) {
      const double l = std::sqrt(d * d - 4.0 * radius * radius);
      const double phi = std::atan2(c2.y - c1.y, c2.x - c1.x) + std::atan2(2.0 * radius, l);
      consider({DubinsWord::LSR, wrap_positive(phi - from[2]), l, wrap_positive(phi - to[2]), radius});
    }
  }
  {  // RSL
    const Point c1 = right_center(from, radius);
    const Point c2 = left_center(to, radius);
    const double d = std::hypot(c2.x - c1.x, c2.y - c1.y);
    if (d >= 2.0 * radius) {
      const double l = std::sqrt(d * d - 4.0 * radius * radius);
      const double phi = std::atan2(c2.y - c1.y, c2.x - c1.x) - std::atan2(2.0 * radius, l);
      consider({DubinsWord::RSL, wrap_positive(from[2] - phi), l, wrap_positive(to[2] - phi), radius});
    }
  }
  return best;
}

}  // namespace sfcmd::synth
