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

#include "sfcmd/csp.hpp"
#include "sfcmd/experiments.hpp"
#include "sfcmd/synthgen.hpp"

using namespace sfcmd;

namespace {

const synth::SynthOutput& trip() {
  static const synth::SynthOutput t = synth::reference_trip();
  return t;
}

ExperimentConfig config(int hz) {
  return {CurveKind::hilbert, {Signal::accel_lat, Signal::accel_lon}, hz, true, {}};
}

void BM_Detect(benchmark::State& state) {
  const ExperimentConfig c = config(static_cast<int>(state.range(0)));
  const PipelineSettings settings;
  const TimeSeries s = prepare_series(trip().series, c, settings);
  const CodeStream stream = encode_series(s, c.kind, encoding_grid(c, settings));
  const CspModel model = calibrate(stream.slice(find_pass(trip().annotations, 1).span), settings.min_weight);
  for (auto _ : state) benchmark::DoNotOptimize(detect(stream, model, c.detector));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * stream.size()));
}

void BM_RunExperiment(benchmark::State& state) {
  const ExperimentConfig c = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(trip().series, trip().annotations, c, {}));
}

}  // namespace

BENCHMARK(BM_Detect)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunExperiment)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
