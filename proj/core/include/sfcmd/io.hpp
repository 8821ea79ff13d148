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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfcmd/csp.hpp"
#include "sfcmd/experiments.hpp"
#include "sfcmd/geofence.hpp"
#include "sfcmd/interval.hpp"
#include "sfcmd/timeseries.hpp"

namespace sfcmd {

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// A calibrated model plus the preprocessing it was calibrated under.
struct ModelFile {
  CspModel model;
  std::vector<Signal> signals;
  std::optional<int> frequency_hz;
  std::optional<bool> normalized;
};

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(std::string_view text);

/// [{"id": "RA1", "polygon": [[lat, lon], ...]}, ...]
std::string fences_to_json(std::span<const Geofence> fences);
std::vector<Geofence> fences_from_json(std::string_view text);

/// pass_id,roundabout_id,t_enter_s,t_exit_s,exits_total,exit_taken
std::string annotations_to_csv(std::span<const AnnotationInterval> annotations);
std::vector<AnnotationInterval> annotations_from_csv(std::string_view text);

/// source,t_begin_s,t_end_s
std::string detections_to_csv(std::span<const DetectionInterval> detections);
std::vector<DetectionInterval> detections_from_csv(std::string_view text);

/// {"accel_lat": [-6, 6], ...}; unlisted signals keep their defaults.
NormalizationSpec normalization_from_json(std::string_view text);
DetectorParams detector_from_json(std::string_view text);

struct GridConfig {
  GridRequest request;
  PipelineSettings settings;
};

/// {frequencies, signals_pool, kinds, normalized, detector, reference_pass_id,
///  bits, min_weight, normalization}; every key optional.
GridConfig grid_config_from_json(std::string_view text);

}  // namespace sfcmd
