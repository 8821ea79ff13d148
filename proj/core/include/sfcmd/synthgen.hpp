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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sfcmd/geofence.hpp"
#include "sfcmd/interval.hpp"
#include "sfcmd/timeseries.hpp"

namespace sfcmd::synth {

/// Local east/north metres on a flat-earth projection around an origin.
struct Xy {
  double x = 0.0;
  double y = 0.0;
};

class LocalFrame {
 public:
  explicit LocalFrame(LatLon origin);
  Xy to_local(LatLon p) const noexcept;
  LatLon to_geo(Xy p) const noexcept;
  LatLon origin() const noexcept { return origin_; }

 private:
  LatLon origin_;
  double metres_per_deg_lat_;
  double metres_per_deg_lon_;
};

// Headings in scripts are compass degrees (0 = north, 90 = east).

/// Straight road. Either duration_s or length_m must be positive. The speed
/// ramps from the incoming speed to `speed` and, at the end, to the entry
/// speed of the next segment.
struct Straight {
  double duration_s = 0.0;
  double length_m = 0.0;
  double speed = 8.3;
};

/// Constant-speed circular arc; positive arc_deg turns left.
struct Turn {
  double radius_m = 10.0;
  double arc_deg = 90.0;
  double speed = 5.0;
};

/// Entry deflection (right), counter-clockwise circulation through
/// exit_index * 360 / exits_total degrees, exit deflection (right).
struct Roundabout {
  std::string id;
  double radius_m = 15.0;
  int exit_index = 1;
  int exits_total = 4;
  std::optional<double> speed;              // default sqrt(circulating_accel * radius)
  std::optional<double> entry_heading_deg;  // checked against the arrival heading
};

/// Planned drive to a target pose: departure straight, shortest
/// circle-straight-circle path, approach straight ending at `target`.
struct Connect {
  LatLon target;
  double heading_deg = 0.0;
  double cruise_speed = 8.3;
  double turn_radius_m = 20.0;
  double turn_speed = 6.0;
  double departure_m = 30.0;
  double approach_m = 40.0;
};

using Segment = std::variant<Straight, Turn, Roundabout, Connect>;

struct DriverModel {
  double circulating_accel = 2.6;  // m/s^2 lateral while circling
  double deflection_accel = 1.875; // m/s^2 lateral in entry/exit deflections
  double deflection_deg = 35.0;
  double max_long_accel = 1.0;     // speed ramps on straights
};

struct TripScript {
  std::vector<Segment> segments;
  int base_hz = 100;
  /// Segment durations are rounded to this quantum so boundaries land on
  /// sample instants at every supported rate.
  double time_quantum_s = 0.2;
  std::map<Signal, double> noise;  // Gaussian sigma in physical units
  double gps_noise_m = 0.3;
  std::uint64_t seed = 17;
  LatLon origin{57.70974, 11.91848};
  Xy start{0.0, 0.0};
  double start_heading_deg = 90.0;
  double start_speed = 8.3;
  bool speed_bumps = false;
  double fence_margin_m = 10.0;
  DriverModel driver;

  static std::map<Signal, double> default_noise();
  void validate() const;
};

struct RoundaboutSite {
  std::string id;
  LatLon center;
  double radius_m = 0.0;
};

struct SynthOutput {
  TimeSeries series;  // all catalog channels at base_hz, including GPS
  std::vector<AnnotationInterval> annotations;
  std::vector<Geofence> fences;  // one square per roundabout id, sized to its passes
  std::vector<RoundaboutSite> sites;
};

SynthOutput generate(const TripScript& script);

/// About 56 minutes of urban driving through 7 roundabouts with 17 passes
/// whose exit pattern follows the published trip (1/4 exits, 2/4 exits, full
/// turns up to 14/4).
TripScript reference_script();
SynthOutput reference_trip();

/// Copy of fence `id` enlarged until it also covers a stretch of road the trip
/// drives at least `clearance_s` away from any annotated pass.
Geofence oversized_fence(const SynthOutput& trip, const std::string& id, double clearance_s = 30.0);

/// Script JSON: {"base_hz", "seed", "origin": [lat, lon], "noise": {...},
/// "segments": [{"type": "straight"|"turn"|"roundabout"|"connect", ...}]}.
TripScript script_from_json(const std::string& text);

}  // namespace sfcmd::synth
