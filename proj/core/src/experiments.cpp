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

#include "sfcmd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

constexpr int kGpsFrequency = 20;

void clamp_to(std::vector<DetectionInterval>& detections, const Interval& span) {
  for (DetectionInterval& d : detections) {
    d.span.begin = std::max(d.span.begin, span.begin);
    d.span.end = std::min(d.span.end, span.end);
  }
  std::erase_if(detections, [](const DetectionInterval& d) { return d.span.empty(); });
}

}  // namespace

std::string ExperimentConfig::id() const {
  std::string out = kind == CurveKind::hilbert ? "H" : "M";
  for (Signal s : signals) {
    out += '-';
    out += signal_info(s).short_name;
  }
  out += '-' + std::to_string(frequency_hz) + "Hz-";
  out += normalized ? "norm" : "raw";
  return out;
}

void ExperimentConfig::validate() const {
  if (signals.size() < 2) throw Error(ErrorKind::invalid_argument, "minimum two signals required for a projection");
  if (canonical_order(signals) != signals) throw Error(ErrorKind::invalid_argument, "signals not in canonical order");
  if (std::set<Signal>(signals.begin(), signals.end()).size() != signals.size()) {
    throw Error(ErrorKind::invalid_argument, "duplicate signal in configuration");
  }
  if (!is_supported_frequency(frequency_hz)) {
    throw Error(ErrorKind::invalid_argument, "unsupported frequency " + std::to_string(frequency_hz));
  }
  for (Signal s : signals) {
    if (!available_at(s, frequency_hz)) {
      throw Error(ErrorKind::unavailable_signal, std::string(signal_info(s).csv_name) + " is not recorded at " +
                                                     std::to_string(frequency_hz) + " Hz");
    }
  }
  detector.validate();
}

std::vector<ExperimentConfig> enumerate_grid(const GridRequest& request) {
  std::vector<Signal> pool = canonical_order(request.signals_pool);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() > 16) throw Error(ErrorKind::invalid_argument, "signal pool too large");
  std::vector<int> freqs = request.frequencies;
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  for (int hz : freqs) {
    if (!is_supported_frequency(hz)) throw Error(ErrorKind::invalid_argument, "unsupported frequency " + std::to_string(hz));
  }

  std::vector<ExperimentConfig> out;
  std::set<std::string> seen;
  for (bool flag : request.normalized) {
    for (CurveKind kind : request.kinds) {
      for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
        std::vector<Signal> subset;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (mask & (1u << i)) subset.push_back(pool[i]);
        }
        if (subset.size() < 2) continue;
        for (int hz : freqs) {
          if (!std::all_of(subset.begin(), subset.end(), [&](Signal s) { return available_at(s, hz); })) continue;
          ExperimentConfig c{kind, subset, hz, flag, request.detector};
          if (seen.insert(c.id()).second) out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

GridSpec encoding_grid(const ExperimentConfig& config, const PipelineSettings& settings) {
  if (config.normalized) return GridSpec::uniform(config.signals.size(), settings.bits, {0.0, 1.0});
  std::vector<ValueRange> ranges;
  for (Signal s : config.signals) ranges.push_back(signal_info(s).full_scale);
  return GridSpec(std::move(ranges), settings.bits);
}

TimeSeries prepare_series(const TimeSeries& trip, const ExperimentConfig& config, const PipelineSettings& settings) {
  TimeSeries s = trip.frequency() == config.frequency_hz ? trip : downsample(trip, config.frequency_hz);
  s = project(s, config.signals);
  if (config.normalized) {
    NormalizationSpec spec = settings.normalization;
    spec.mode = NormalizationMode::min_max;
    s = normalize(s, spec);
  }
  return s;
}

const AnnotationInterval& find_pass(std::span<const AnnotationInterval> annotations, int pass_id) {
  const auto it = std::find_if(annotations.begin(), annotations.end(),
                               [&](const AnnotationInterval& a) { return a.pass_id == pass_id; });
  if (it == annotations.end()) {
    throw Error(ErrorKind::invalid_argument, "missing reference pass " + std::to_string(pass_id));
  }
  return *it;
}

ExperimentResult run_experiment(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                                const ExperimentConfig& config, const PipelineSettings& settings) {
  ExperimentResult r;
  r.id = config.id();
  r.config = config;
  try {
    config.validate();
    const AnnotationInterval& reference = find_pass(annotations, settings.reference_pass_id);
    const TimeSeries series = prepare_series(trip, config, settings);
    const CodeStream stream = encode_series(series, config.kind, encoding_grid(config, settings));
    const CspModel model = calibrate(stream.slice(reference.span), settings.min_weight);
    r.detections = detect(stream, model, config.detector, r.id);
    clamp_to(r.detections, trip.span());
    r.metrics = score(r.detections, annotations, trip.span());
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.detections.clear();
    r.metrics = {};
  }
  return r;
}

ExperimentResult annotation_baseline(std::span<const AnnotationInterval> annotations, const Interval& trip_span) {
  ExperimentResult r;
  r.id = "annotations";
  r.baseline = true;
  for (const AnnotationInterval& a : annotations) r.detections.push_back({a.span, r.id});
  r.metrics = score(r.detections, annotations, trip_span);
  return r;
}

ExperimentResult geofence_baseline(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                                   std::span<const Geofence> fences, const GeofenceParams& params) {
  ExperimentResult r;
  r.id = "geofence";
  r.baseline = true;
  try {
    const TimeSeries gps = trip.frequency() == kGpsFrequency ? trip : downsample(trip, kGpsFrequency);
    r.detections = detect_geofence(gps, fences, default_gps_grid(), params);
    clamp_to(r.detections, trip.span());
    r.metrics = score(r.detections, annotations, trip.span());
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.detections.clear();
    r.metrics = {};
  }
  return r;
}

std::size_t GridReport::baseline_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ExperimentResult& r) { return r.baseline; }));
}

unsigned default_workers() {
  if (const char* env = std::getenv("SFCMD_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

GridReport run_grid(const TimeSeries& trip, std::span<const AnnotationInterval> annotations,
                    std::span<const ExperimentConfig> configs, const PipelineSettings& settings,
                    std::span<const Geofence> fences, unsigned workers) {
  const auto started = std::chrono::steady_clock::now();
  find_pass(annotations, settings.reference_pass_id);
  if (trip.empty()) throw Error(ErrorKind::empty_series, "empty series");

  GridReport report;
  report.trip_span = trip.span();
  report.annotations.assign(annotations.begin(), annotations.end());

  std::vector<ExperimentResult> results(configs.size());
  if (workers == 0) workers = default_workers();
  workers = std::min<unsigned>(workers, std::max<std::size_t>(1, configs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      results[i] = run_experiment(trip, annotations, configs[i], settings);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::sort(results.begin(), results.end(),
            [](const ExperimentResult& a, const ExperimentResult& b) { return a.id < b.id; });
  std::vector<std::pair<std::string, MetricsReport>> scored;
  for (const ExperimentResult& r : results) {
    if (r.ok) scored.emplace_back(r.id, r.metrics);
  }
  scored = rank(std::move(scored));

  report.rows.push_back(annotation_baseline(annotations, report.trip_span));
  const bool has_gps = trip.has(Signal::gps_lat) && trip.has(Signal::gps_lon);
  if (has_gps && !fences.empty()) report.rows.push_back(geofence_baseline(trip, annotations, fences));

  auto by_id = [&](const std::string& id) {
    return std::lower_bound(results.begin(), results.end(), id,
                            [](const ExperimentResult& r, const std::string& key) { return r.id < key; });
  };
  for (const auto& [id, metrics] : scored) report.rows.push_back(*by_id(id));
  for (ExperimentResult& r : results) {
    if (!r.ok) report.rows.push_back(std::move(r));
  }
  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace sfcmd
