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
#include <vector>

#include "sfcmd/interval.hpp"
#include "sfcmd/sfc.hpp"
#include "sfcmd/timeseries.hpp"

namespace sfcmd {

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const LatLon&) const = default;
};

/// Polygonal region in degrees. The bounding corners are derived from the
/// vertices on construction.
class Geofence {
 public:
  Geofence(std::string id, std::vector<LatLon> polygon);

  /// Axis-aligned square of the given half-width in metres around `center`
  /// (local flat-earth scale at the center latitude).
  static Geofence square(std::string id, LatLon center, double half_width_m);

  const std::string& id() const noexcept { return id_; }
  std::span<const LatLon> polygon() const noexcept { return polygon_; }
  LatLon bottom_left() const noexcept { return bl_; }
  LatLon top_right() const noexcept { return tr_; }

 private:
  std::string id_;
  std::vector<LatLon> polygon_;
  LatLon bl_;
  LatLon tr_;
};

/// Default lat/lon quantization: 21 bits per axis over a box around
/// Gothenburg (about 2 cm per cell).
GridSpec default_gps_grid();

struct GeoEntry {
  std::uint64_t code = 0;  // Morton(lat, lon), lat in dimension 0
  Micros t = 0;
  LatLon position;  // the recorded tuple behind the code
};

/// Sorted (code, t) index over the GPS samples of one trip. Ties on the code
/// keep time order.
class GeoIndex {
 public:
  GeoIndex(GridSpec grid, std::vector<GeoEntry> entries);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const GeoEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  GridSpec grid_;
  std::vector<GeoEntry> entries_;
};

struct GeoCandidate {
  LatLon position;
  Micros t = 0;
  bool operator==(const GeoCandidate&) const = default;
};

GeoIndex build_index(const TimeSeries& series, const GridSpec& grid);

/// Every entry whose code lies in [Morton(BL), Morton(TR)]. This is a
/// superset of the samples inside the fence's bounding box; Z-order jumps
/// admit extra candidates that pip_filter removes. Results are in code order.
std::vector<GeoCandidate> range_query(const GeoIndex& index, const Geofence& fence);

/// Ray-casting point-in-polygon; points on an edge or vertex count as inside.
bool point_in_polygon(LatLon p, std::span<const LatLon> polygon);
std::vector<GeoCandidate> pip_filter(std::span<const GeoCandidate> candidates, const Geofence& fence);

struct GeofenceParams {
  double gap_max_s = 2.0;
};

/// Timestamps retained by range query + PIP for one fence, ascending.
std::vector<Micros> fence_hits(const GeoIndex& index, const Geofence& fence);

/// Groups consecutive hits whose gap is <= gap_max into intervals
/// [first, last + step). Output sorted by start.
std::vector<DetectionInterval> group_hits(std::span<const Micros> hits, Micros step_us, Micros gap_max_us,
                                          const std::string& label);

/// Per fence, maximal sample runs inside the polygon; all fences merged and
/// sorted by start time.
std::vector<DetectionInterval> detect_geofence(const TimeSeries& series, std::span<const Geofence> fences,
                                               const GridSpec& grid, const GeofenceParams& params = {});

}  // namespace sfcmd
