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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfcmd/csp.hpp"
#include "sfcmd/evaluation.hpp"
#include "sfcmd/geofence.hpp"
#include "sfcmd/interval.hpp"
#include "sfcmd/sfc.hpp"
#include "sfcmd/timeseries.hpp"

namespace sfcmd {

struct ExperimentConfig {
  CurveKind kind = CurveKind::hilbert;
  std::vector<Signal> signals;  // canonical order
  int frequency_hz = 10;
  bool normalized = true;
  DetectorParams detector;

  /// e.g. "H-ax-ay-10Hz-norm", "M-ax-steer-yaw-5Hz-raw".
  std::string id() const;
  void validate() const;
};

struct GridRequest {
  std::vector<int> frequencies{5, 10, 20, 50, 100};
  std::vector<Signal> signals_pool{Signal::accel_lat, Signal::accel_lon, Signal::steering_angle, Signal::yaw_rate};
  std::vector<CurveKind> kinds{CurveKind::hilbert, CurveKind::morton};
  std::vector<bool> normalized{true};
  DetectorParams detector;
};

/// Every subset of the pool with at least two signals, at every frequency
/// where all its members are recorded, for every curve kind and flag.
std::vector<ExperimentConfig> enumerate_grid(const GridRequest& request);

struct PipelineSettings {
  unsigned bits = 4;
  NormalizationSpec normalization = NormalizationSpec::defaults();
  double min_weight = 0.01;
  int reference_pass_id = 1;
};

/// Unit box for normalized runs, catalog sensor ranges otherwise.
GridSpec encoding_grid(const ExperimentConfig& config, const PipelineSettings& settings);

/// Down-sample, project to the config's signals, and normalize if asked.
TimeSeries prepare_series(const TimeSeries& trip, const ExperimentConfig& config, const PipelineSettings& settings);

const AnnotationInterval& find_pass(std::span<const AnnotationInterval> annotations, int pass_id);

struct ExperimentResult {
  std::string id;
  std::optional<ExperimentConfig> config;  // empty for baselines
  bool baseline = false;
  bool ok = true;
  std::string error;
  std::vector<DetectionInterval> detections;
  MetricsReport metrics;
};

ExperimentResult run_experiment(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                                const ExperimentConfig& config, const PipelineSettings& settings);

ExperimentResult annotation_baseline(std::span<const AnnotationInterval> annotations, const Interval& trip_span);

/// GPS fences evaluated on the trip down-sampled to 20 Hz.
ExperimentResult geofence_baseline(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                                   std::span<const Geofence> fences, const GeofenceParams& params = {});

struct GridReport {
  Interval trip_span;
  std::vector<AnnotationInterval> annotations;
  std::vector<ExperimentResult> rows;  // baselines first, then ranked configs, failed configs last
  double elapsed_s = 0.0;

  std::size_t baseline_count() const;
};

/// SFCMD_WORKERS if set and positive, else the hardware concurrency.
unsigned default_workers();

GridReport run_grid(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                    std::span<const ExperimentConfig> configs, const PipelineSettings& settings,
                    std::span<const Geofence> fences = {}, unsigned workers = 0);

}  // namespace sfcmd
