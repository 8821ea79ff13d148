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

#include "sfcmd/geofence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

constexpr double kEarthRadiusM = 6378137.0;

double cross(LatLon o, LatLon a, LatLon b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool on_segment(LatLon p, LatLon a, LatLon b) {
  if (cross(a, b, p) != 0.0) return false;
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

int orientation(LatLon a, LatLon b, LatLon c) {
  const double v = cross(a, b, c);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

bool segments_intersect(LatLon p1, LatLon p2, LatLon q1, LatLon q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(q1, p1, p2)) || (o2 == 0 && on_segment(q2, p1, p2)) ||
         (o3 == 0 && on_segment(p1, q1, q2)) || (o4 == 0 && on_segment(p2, q1, q2));
}

bool is_simple(std::span<const LatLon> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const LatLon a1 = poly[i];
    const LatLon a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a1, a2, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

std::uint64_t corner_code(LatLon corner, const GridSpec& grid) {
  const std::array<double, 2> v{corner.lat, corner.lon};
  std::array<std::uint32_t, 2> cells{};
  quantize_into(v, grid, cells);
  return detail::morton_interleave(cells.data(), 2, grid.bits());
}

}  // namespace

Geofence::Geofence(std::string id, std::vector<LatLon> polygon)
    : id_(std::move(id)), polygon_(std::move(polygon)) {
  if (polygon_.size() >= 2 && polygon_.front() == polygon_.back()) polygon_.pop_back();
  if (polygon_.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "geofence '" + id_ + "' needs at least 3 vertices");
  }
  for (const auto& v : polygon_) {
    if (!std::isfinite(v.lat) || !std::isfinite(v.lon)) {
      throw Error(ErrorKind::invalid_argument, "geofence '" + id_ + "' has a non-finite vertex");
    }
  }
  if (!is_simple(polygon_)) {
    throw Error(ErrorKind::invalid_argument, "geofence '" + id_ + "' polygon self-intersects");
  }
  bl_ = tr_ = polygon_.front();
  for (const auto& v : polygon_) {
    bl_.lat = std::min(bl_.lat, v.lat);
    bl_.lon = std::min(bl_.lon, v.lon);
    tr_.lat = std::max(tr_.lat, v.lat);
    tr_.lon = std::max(tr_.lon, v.lon);
  }
}

Geofence Geofence::square(std::string id, LatLon center, double half_width_m) {
  if (!(half_width_m > 0.0)) throw Error(ErrorKind::invalid_argument, "fence half-width must be positive");
  const double dlat = half_width_m / kEarthRadiusM * 180.0 / std::numbers::pi;
  const double dlon =
      half_width_m / (kEarthRadiusM * std::cos(center.lat * std::numbers::pi / 180.0)) * 180.0 / std::numbers::pi;
  return Geofence(std::move(id), {{center.lat - dlat, center.lon - dlon},
                                  {center.lat - dlat, center.lon + dlon},
                                  {center.lat + dlat, center.lon + dlon},
                                  {center.lat + dlat, center.lon - dlon}});
}

GridSpec default_gps_grid() { return GridSpec({{57.5, 57.9}, {11.7, 12.2}}, 21); }

GeoIndex::GeoIndex(GridSpec grid, std::vector<GeoEntry> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const GeoEntry& a, const GeoEntry& b) { return a.code < b.code; });
}

GeoIndex build_index(const TimeSeries& series, const GridSpec& grid) {
  if (grid.dims() != 2) throw Error(ErrorKind::dimension_mismatch, "GPS grid must be two-dimensional");
  if (!series.has(Signal::gps_lat) || !series.has(Signal::gps_lon)) {
    throw Error(ErrorKind::missing_channel, "series lacks gps_lat/gps_lon channels");
  }
  const auto lat = series.channel(Signal::gps_lat);
  const auto lon = series.channel(Signal::gps_lon);
  std::vector<GeoEntry> entries;
  entries.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::array<double, 2> v{lat[i], lon[i]};
    std::array<std::uint32_t, 2> cells{};
    quantize_into(v, grid, cells);
    entries.push_back({detail::morton_interleave(cells.data(), 2, grid.bits()), series.timestamp(i),
                       LatLon{lat[i], lon[i]}});
  }
  return GeoIndex(grid, std::move(entries));
}

std::vector<GeoCandidate> range_query(const GeoIndex& index, const Geofence& fence) {
  const std::uint64_t lo = corner_code(fence.bottom_left(), index.grid());
  const std::uint64_t hi = corner_code(fence.top_right(), index.grid());
  const auto entries = index.entries();
  const auto first = std::lower_bound(entries.begin(), entries.end(), lo,
                                      [](const GeoEntry& e, std::uint64_t c) { return e.code < c; });
  const auto last = std::upper_bound(first, entries.end(), hi,
                                     [](std::uint64_t c, const GeoEntry& e) { return c < e.code; });
  std::vector<GeoCandidate> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) out.push_back({it->position, it->t});
  return out;
}

bool point_in_polygon(LatLon p, std::span<const LatLon> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon a = polygon[i];
    const LatLon b = polygon[j];
    if (on_segment(p, a, b)) return true;
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<GeoCandidate> pip_filter(std::span<const GeoCandidate> candidates, const Geofence& fence) {
  std::vector<GeoCandidate> out;
  const LatLon bl = fence.bottom_left();
  const LatLon tr = fence.top_right();
  for (const auto& c : candidates) {
    const bool in_box = c.position.lat >= bl.lat && c.position.lat <= tr.lat && c.position.lon >= bl.lon &&
                        c.position.lon <= tr.lon;
    if (in_box && point_in_polygon(c.position, fence.polygon())) out.push_back(c);
  }
  return out;
}

std::vector<Micros> fence_hits(const GeoIndex& index, const Geofence& fence) {
  const auto candidates = range_query(index, fence);
  const auto inside = pip_filter(candidates, fence);
  std::vector<Micros> hits;
  hits.reserve(inside.size());
  for (const auto& c : inside) hits.push_back(c.t);
  std::sort(hits.begin(), hits.end());
  return hits;
}

std::vector<DetectionInterval> group_hits(std::span<const Micros> hits, Micros step_us, Micros gap_max_us,
                                          const std::string& label) {
  std::vector<DetectionInterval> out;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= hits.size(); ++i) {
    if (i == hits.size() || hits[i] - hits[i - 1] > gap_max_us) {
      if (!hits.empty()) out.push_back({{hits[run_start], hits[i - 1] + step_us}, label});
      run_start = i;
    }
  }
  return out;
}

std::vector<DetectionInterval> detect_geofence(const TimeSeries& series, std::span<const Geofence> fences,
                                               const GridSpec& grid, const GeofenceParams& params) {
  const GeoIndex index = build_index(series, grid);
  const Micros gap = from_seconds(params.gap_max_s);
  std::vector<DetectionInterval> out;
  for (const auto& fence : fences) {
    const auto hits = fence_hits(index, fence);
    auto runs = group_hits(hits, series.step_us(), gap, fence.id());
    out.insert(out.end(), runs.begin(), runs.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const DetectionInterval& a, const DetectionInterval& b) {
    return a.span.begin < b.span.begin;
  });
  return out;
}

}  // namespace sfcmd
