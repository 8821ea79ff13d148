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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "sfcmd/dubins.hpp"
#include "sfcmd/error.hpp"
#include "sfcmd/synthgen.hpp"

using namespace sfcmd;
using namespace sfcmd::synth;

namespace {

constexpr double kPi = std::numbers::pi;

TripScript quiet(TripScript s) {
  s.noise.clear();
  s.gps_noise_m = 0.0;
  return s;
}

TripScript single_roundabout(double radius, double speed) {
  TripScript s;
  s.start_speed = speed;
  s.segments = {Straight{10.0, 0.0, speed}, Roundabout{"R", radius, 4, 4, speed, std::nullopt},
                Straight{10.0, 0.0, speed}};
  return s;
}

std::vector<Xy> local_track(const SynthOutput& out, const LocalFrame& frame) {
  std::vector<Xy> xy;
  const auto lat = out.series.channel(Signal::gps_lat);
  const auto lon = out.series.channel(Signal::gps_lon);
  for (std::size_t i = 0; i < out.series.size(); ++i) xy.push_back(frame.to_local({lat[i], lon[i]}));
  return xy;
}

}  // namespace

TEST(Synth, StraightHasNoLateralMotion) {
  TripScript s;
  s.segments = {Straight{30.0, 0.0, 8.3}};
  const SynthOutput clean = generate(quiet(s));
  for (double v : clean.series.channel(Signal::accel_lat)) ASSERT_EQ(v, 0.0);
  for (double v : clean.series.channel(Signal::yaw_rate)) ASSERT_EQ(v, 0.0);

  const SynthOutput noisy = generate(s);
  const double sigma = TripScript::default_noise().at(Signal::accel_lat);
  std::size_t within = 0;
  const auto ax = noisy.series.channel(Signal::accel_lat);
  for (double v : ax) within += std::abs(v) <= 3.0 * sigma;
  EXPECT_GE(static_cast<double>(within) / static_cast<double>(ax.size()), 0.99);
}

TEST(Synth, CirculationMatchesCircularMotion) {
  const TripScript s = quiet(single_roundabout(15.0, 6.0));
  const SynthOutput out = generate(s);
  ASSERT_EQ(out.annotations.size(), 1u);
  const AnnotationInterval& a = out.annotations[0];
  const auto ax = out.series.channel(Signal::accel_lat);
  const auto yaw = out.series.channel(Signal::yaw_rate);
  const auto v = out.series.channel(Signal::speed);

  // Middle third of the pass lies on the circulating arc.
  const std::size_t first = out.series.index_at_or_after(a.span.begin + a.span.length() / 3);
  const std::size_t last = out.series.index_at_or_after(a.span.end - a.span.length() / 3);
  ASSERT_LT(first, last);

  // Curvature recovered from the GPS track by finite differences.
  const LocalFrame frame(s.origin);
  const auto xy = local_track(out, frame);
  for (std::size_t i = first; i < last; ++i) {
    EXPECT_NEAR(ax[i], 2.4, 0.05);
    EXPECT_NEAR(yaw[i], 0.4, 0.01);
    EXPECT_NEAR(ax[i], v[i] * v[i] / 15.0, 1e-9);
    const double h0 = std::atan2(xy[i].y - xy[i - 1].y, xy[i].x - xy[i - 1].x);
    const double h1 = std::atan2(xy[i + 1].y - xy[i].y, xy[i + 1].x - xy[i].x);
    const double ds = std::hypot(xy[i + 1].x - xy[i].x, xy[i + 1].y - xy[i].y);
    double dh = h1 - h0;
    if (dh > kPi) dh -= 2 * kPi;
    if (dh < -kPi) dh += 2 * kPi;
    EXPECT_NEAR(dh / ds, 1.0 / 15.0, 1e-4);
  }
  // The deflections turn right, the circulation left.
  const std::size_t entry = out.series.index_at_or_after(a.span.begin) + 5;
  EXPECT_LT(ax[entry], 0.0);
  EXPECT_NEAR(ax[entry], -s.driver.deflection_accel, 0.05);
}

TEST(Synth, GpsSpeedAgreesWithSpeedChannel) {
  const SynthOutput out = generate(quiet(reference_script()));
  const LocalFrame frame(reference_script().origin);
  const auto xy = local_track(out, frame);
  const auto v = out.series.channel(Signal::speed);
  const double dt = 1.0 / out.series.frequency();
  for (std::size_t i = 1; i + 1 < xy.size(); ++i) {
    const double gps_speed = std::hypot(xy[i + 1].x - xy[i - 1].x, xy[i + 1].y - xy[i - 1].y) / (2 * dt);
    ASSERT_NEAR(gps_speed, v[i], 0.01 * v[i] + 1e-3) << i;
  }
}

TEST(Synth, DeadReckoningFollowsGps) {
  const TripScript script = quiet(reference_script());
  const SynthOutput out = generate(script);
  const LocalFrame frame(script.origin);
  const auto xy = local_track(out, frame);
  const auto v = out.series.channel(Signal::speed);
  const auto h = out.series.channel(Signal::heading);
  const double dt = 1.0 / out.series.frequency();
  double x = xy[0].x, y = xy[0].y, worst = 0.0;
  for (std::size_t i = 1; i < xy.size(); ++i) {
    x += 0.5 * dt * (v[i - 1] * std::sin(h[i - 1]) + v[i] * std::sin(h[i]));
    y += 0.5 * dt * (v[i - 1] * std::cos(h[i - 1]) + v[i] * std::cos(h[i]));
    worst = std::max(worst, std::hypot(x - xy[i].x, y - xy[i].y));
  }
  EXPECT_LT(worst, 2.0);
}

TEST(Synth, Deterministic) {
  TripScript s = single_roundabout(12.0, 5.5);
  s.noise = TripScript::default_noise();
  const SynthOutput a = generate(s), b = generate(s);
  for (const auto& c : a.series.channels()) {
    const auto other = b.series.channel(c.signal);
    ASSERT_TRUE(std::equal(c.samples.begin(), c.samples.end(), other.begin()));
  }
  TripScript t = s;
  t.seed = s.seed + 1;
  const SynthOutput c = generate(t);
  EXPECT_NE(c.series.channel(Signal::accel_lat)[10], a.series.channel(Signal::accel_lat)[10]);
}

TEST(Synth, BoundariesLandOnTheCoarsestSampleGrid) {
  const SynthOutput out = generate(reference_script());
  for (const AnnotationInterval& a : out.annotations) {
    EXPECT_EQ(a.span.begin % 200'000, 0);
    EXPECT_EQ(a.span.end % 200'000, 0);
  }
  EXPECT_EQ(out.series.span().length() % 200'000, 0);
}

TEST(ReferenceTrip, Shape) {
  const SynthOutput out = reference_trip();
  ASSERT_EQ(out.annotations.size(), 17u);
  std::set<std::string> ids;
  bool multi_turn = false, first_exit = false;
  for (std::size_t i = 0; i < out.annotations.size(); ++i) {
    const AnnotationInterval& a = out.annotations[i];
    EXPECT_EQ(a.pass_id, static_cast<int>(i) + 1);
    ids.insert(a.roundabout_id);
    multi_turn |= a.exit_taken > a.exits_total;
    first_exit |= a.exit_taken == 1;
    if (i > 0) EXPECT_LE(out.annotations[i - 1].span.end, a.span.begin);
  }
  EXPECT_EQ(ids.size(), 7u);
  EXPECT_TRUE(multi_turn);
  EXPECT_TRUE(first_exit);
  EXPECT_EQ(out.annotations[16].exit_taken, 14);
  const double minutes = to_seconds(out.series.span().length()) / 60.0;
  EXPECT_GT(minutes, 50.0);
  EXPECT_LT(minutes, 62.0);
  EXPECT_EQ(out.fences.size(), 7u);
  EXPECT_EQ(out.series.frequency(), 100);
  EXPECT_EQ(out.series.signals().size(), kSignalCount);
}

TEST(ReferenceTrip, SitesSitOnTheirCoordinates) {
  const SynthOutput out = reference_trip();
  const std::map<std::string, LatLon> expected{{"RA1", {57.70974, 11.91848}}, {"RA2", {57.70207, 11.91152}},
                                               {"RA3", {57.70655, 11.92202}}, {"RA4", {57.70998, 11.92721}},
                                               {"RA5", {57.71007, 11.93112}}, {"RA6", {57.70771, 11.93477}},
                                               {"RA7", {57.71113, 11.94337}}};
  ASSERT_EQ(out.sites.size(), 7u);
  for (const RoundaboutSite& s : out.sites) {
    const LocalFrame frame(expected.at(s.id));
    const Xy d = frame.to_local(s.center);
    EXPECT_LT(std::hypot(d.x, d.y), 0.05) << s.id;
  }
}

TEST(ReferenceTrip, FencesContainEveryAnnotatedSample) {
  const SynthOutput out = generate(quiet(reference_script()));
  const auto lat = out.series.channel(Signal::gps_lat);
  const auto lon = out.series.channel(Signal::gps_lon);
  for (const AnnotationInterval& a : out.annotations) {
    const auto fence = std::find_if(out.fences.begin(), out.fences.end(),
                                    [&](const Geofence& f) { return f.id() == a.roundabout_id; });
    ASSERT_NE(fence, out.fences.end());
    for (std::size_t i = out.series.index_at_or_after(a.span.begin); i < out.series.index_at_or_after(a.span.end); ++i) {
      ASSERT_TRUE(point_in_polygon({lat[i], lon[i]}, fence->polygon()));
    }
  }
}

TEST(ReferenceTrip, OversizedFenceGrows) {
  const SynthOutput out = reference_trip();
  const Geofence big = oversized_fence(out, "RA1");
  const Geofence& small = out.fences[0];
  EXPECT_LT(big.bottom_left().lat, small.bottom_left().lat);
  EXPECT_GT(big.top_right().lon, small.top_right().lon);
  EXPECT_THROW(oversized_fence(out, "RA9"), Error);
}

TEST(Synth, SpeedBumpsOnlyWhenAsked) {
  TripScript s = quiet(single_roundabout(12.0, 5.5));
  const SynthOutput flat = generate(s);
  for (double v : flat.series.channel(Signal::accel_vert)) ASSERT_EQ(v, 0.0);
  s.speed_bumps = true;
  const SynthOutput bumpy = generate(s);
  const auto az = bumpy.series.channel(Signal::accel_vert);
  EXPECT_NEAR(*std::max_element(az.begin(), az.end()), 3.0, 0.05);
}

TEST(Synth, ValidatesScripts) {
  TripScript s;
  EXPECT_THROW(generate(s), Error);
  s.segments = {Straight{1.0, 5.0, 8.0}};
  EXPECT_THROW(generate(s), Error);
  s.segments = {Turn{10.0, 0.0, 5.0}};
  EXPECT_THROW(generate(s), Error);
  s.segments = {Straight{5.0, 0.0, 8.0}, Roundabout{"R", 10.0, 2, 4, std::nullopt, 123.0}};
  EXPECT_THROW(generate(s), Error);  // arrives heading east, not 123 degrees
  s.segments = {Straight{5.0, 0.0, 8.0}, Roundabout{"R", 10.0, 2, 4, std::nullopt, 90.0}};
  EXPECT_NO_THROW(generate(s));
}

TEST(Synth, ScriptJson) {
  const std::string text = R"({
    "seed": 5, "base_hz": 50, "gps_noise_m": 0,
    "noise": {"ax": 0.1},
    "segments": [
      {"type": "straight", "duration_s": 4, "speed": 7},
      {"type": "turn", "radius_m": 20, "arc_deg": -90, "speed": 6},
      {"type": "roundabout", "id": "X", "radius_m": 14, "exit_index": 2},
      {"type": "connect", "to": [57.711, 11.92], "heading_deg": 0},
      {"type": "straight", "length_m": 50}
    ]})";
  const TripScript s = script_from_json(text);
  EXPECT_EQ(s.seed, 5u);
  EXPECT_EQ(s.segments.size(), 5u);
  EXPECT_EQ(s.noise.at(Signal::accel_lat), 0.1);
  const SynthOutput out = generate(s);
  EXPECT_EQ(out.series.frequency(), 50);
  ASSERT_EQ(out.annotations.size(), 1u);
  EXPECT_EQ(out.annotations[0].exit_taken, 2);
  EXPECT_THROW(script_from_json(R"({"segments": [{"type": "hover"}]})"), Error);
  EXPECT_THROW(script_from_json("{"), Error);
}

TEST(Synth, ConnectArrivesAtTarget) {
  TripScript s = quiet(TripScript{});
  const LocalFrame frame(s.origin);
  const LatLon target = frame.to_geo({300.0, 250.0});
  s.segments = {Straight{3.0, 0.0, 8.3}, Connect{target, 180.0}, Straight{5.0, 0.0, 8.3}};
  const SynthOutput out = generate(s);
  // The last 5 s drive south from the target.
  const std::size_t at = out.series.size() - 5 * 100;
  const Xy p = frame.to_local({out.series.channel(Signal::gps_lat)[at], out.series.channel(Signal::gps_lon)[at]});
  EXPECT_NEAR(p.x, 300.0, 0.01);
  EXPECT_NEAR(p.y, 250.0, 0.01);
  EXPECT_NEAR(out.series.channel(Signal::heading)[at], kPi, 1e-6);
}

TEST(Dubins, EndsAtTheGoalPose) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-200, 200), ang(-kPi, kPi);
  for (int k = 0; k < 200; ++k) {
    const std::array<double, 3> from{pos(rng), pos(rng), ang(rng)}, to{pos(rng), pos(rng), ang(rng)};
    const double r = 20.0;
    const DubinsPath p = shortest_csc(from, to, r);
    // March along the three pieces in small steps.
    double x = from[0], y = from[1], h = from[2];
    auto arc = [&](double angle, bool left) {
      const int steps = 2000;
      for (int i = 0; i < steps; ++i) {
        const double dh = (left ? 1 : -1) * angle / steps;
        const double mid = h + dh / 2;
        const double chord = 2 * r * std::sin(std::abs(dh) / 2);
        x += chord * std::cos(mid);
        y += chord * std::sin(mid);
        h += dh;
      }
    };
    arc(p.first_arc, p.first_left());
    x += p.straight * std::cos(h);
    y += p.straight * std::sin(h);
    arc(p.second_arc, p.second_left());
    ASSERT_NEAR(x, to[0], 1e-6);
    ASSERT_NEAR(y, to[1], 1e-6);
    ASSERT_NEAR(std::remainder(h - to[2], 2 * kPi), 0.0, 1e-9);
    ASSERT_GE(p.length() + 1e-9, std::hypot(to[0] - from[0], to[1] - from[1]));
  }
  const DubinsPath ahead = shortest_csc({0, 0, 0}, {100, 0, 0}, 10.0);
  EXPECT_NEAR(ahead.length(), 100.0, 1e-9);
  EXPECT_THROW(shortest_csc({0, 0, 0}, {1, 1, 0}, 0.0), Error);
}
