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

#include <benchmark/benchmark.h>

#include "sfcmd/geofence.hpp"
#include "sfcmd/synthgen.hpp"
#include "sfcmd/timeseries.hpp"

using namespace sfcmd;

namespace {

const TimeSeries& gps_20hz() {
  static const TimeSeries s = downsample(synth::reference_trip().series, 20);
  return s;
}

void BM_BuildIndex(benchmark::State& state) {
  const GridSpec grid = default_gps_grid();
  for (auto _ : state) benchmark::DoNotOptimize(build_index(gps_20hz(), grid));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * gps_20hz().size()));
}

void BM_FenceQuery(benchmark::State& state) {
  const GeoIndex index = build_index(gps_20hz(), default_gps_grid());
  const auto fences = synth::reference_trip().fences;
  for (auto _ : state) {
    for (const auto& f : fences) benchmark::DoNotOptimize(fence_hits(index, f));
  }
}

void BM_BruteForceScan(benchmark::State& state) {
  const auto fences = synth::reference_trip().fences;
  const auto lat = gps_20hz().channel(Signal::gps_lat);
  const auto lon = gps_20hz().channel(Signal::gps_lon);
  for (auto _ : state) {
    std::size_t inside = 0;
    for (const auto& f : fences) {
      for (std::size_t i = 0; i < lat.size(); ++i) inside += point_in_polygon({lat[i], lon[i]}, f.polygon());
    }
    benchmark::DoNotOptimize(inside);
  }
}

}  // namespace

BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FenceQuery)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BruteForceScan)->Unit(benchmark::kMillisecond);
