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

// Command line front end: encode, calibrate, detect, geofence, eval, grid, synth.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfcmd/csp.hpp"
#include "sfcmd/error.hpp"
#include "sfcmd/evaluation.hpp"
#include "sfcmd/experiments.hpp"
#include "sfcmd/geofence.hpp"
#include "sfcmd/io.hpp"
#include "sfcmd/report.hpp"
#include "sfcmd/synthgen.hpp"
#include "sfcmd/timeseries.hpp"

namespace fs = std::filesystem;
using namespace sfcmd;

namespace {

struct InputOpts {
  std::string csv;
  int frequency = 100;
};

struct PrepOpts {
  std::vector<std::string> signals{"ax", "ay"};
  std::string kind = "hilbert";
  unsigned bits = 4;
  int target_hz = 10;
  bool raw = false;
  std::string normalization;
};

void add_input(CLI::App* app, InputOpts& in) {
  app->add_option("-i,--input", in.csv, "trip CSV with a timestamp_us column")->required()->check(CLI::ExistingFile);
  app->add_option("-f,--frequency", in.frequency, "declared sampling rate of the CSV in Hz");
}

void add_prep(CLI::App* app, PrepOpts& p) {
  app->add_option("-s,--signals", p.signals, "signals to project onto (csv or short names)")->delimiter(',');
  app->add_option("-k,--kind", p.kind, "hilbert or morton");
  app->add_option("-b,--bits", p.bits, "bits per dimension");
  app->add_option("-r,--rate", p.target_hz, "down-sample to this rate before encoding");
  app->add_flag("--raw", p.raw, "encode raw values over the sensor range instead of normalizing");
  app->add_option("--normalization", p.normalization, "JSON file with per-signal min/max bounds")
      ->check(CLI::ExistingFile);
}

TimeSeries load_trip(const InputOpts& in) {
  CsvLoadResult r = load_csv(in.csv, in.frequency);
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(r.series);
}

ExperimentConfig config_of(const PrepOpts& p) {
  ExperimentConfig c;
  c.kind = parse_curve_kind(p.kind);
  for (const std::string& s : p.signals) c.signals.push_back(parse_signal(s));
  c.signals = canonical_order(c.signals);
  c.frequency_hz = p.target_hz;
  c.normalized = !p.raw;
  return c;
}

PipelineSettings settings_of(const PrepOpts& p) {
  PipelineSettings s;
  s.bits = p.bits;
  if (!p.normalization.empty()) s.normalization = normalization_from_json(read_text(p.normalization));
  return s;
}

CodeStream encode_trip(const TimeSeries& trip, const ExperimentConfig& c, const PipelineSettings& s) {
  return encode_series(prepare_series(trip, c, s), c.kind, encoding_grid(c, s));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

void print_metrics(const std::string& label, const MetricsReport& m) {
  std::printf("%-24s tp=%d hits=%d guesses=%d fp=%d | tp_s=%s fp_s=%s fn_s=%s tn_s=%s | P=%.4f R=%.4f F1=%.4f\n",
              label.c_str(), m.boolean.tp_passes, m.boolean.hits, m.boolean.guesses, m.boolean.false_positives(),
              format_seconds(m.time.tp_us).c_str(), format_seconds(m.time.fp_us).c_str(),
              format_seconds(m.time.fn_us).c_str(), format_seconds(m.time.tn_us).c_str(), m.time.precision,
              m.time.recall, m.time.f1);
}

Interval parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::invalid_argument, "window must be 'begin_s,end_s'");
  return {from_seconds(std::stod(text.substr(0, comma))), from_seconds(std::stod(text.substr(comma + 1)))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maneuver detection on space-filling-curve encoded vehicle signals"};
  app.require_subcommand(1);

  InputOpts enc_in;
  PrepOpts enc_prep;
  std::string enc_out;
  auto* encode = app.add_subcommand("encode", "write the code stream of a trip");
  add_input(encode, enc_in);
  add_prep(encode, enc_prep);
  encode->add_option("-o,--output", enc_out, "codes CSV (default stdout)");

  InputOpts cal_in;
  PrepOpts cal_prep;
  std::string cal_window, cal_annotations, cal_out;
  int cal_pass = 1;
  double cal_min_weight = 0.01;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "build a stripe model from a reference maneuver");
  add_input(calibrate_cmd, cal_in);
  add_prep(calibrate_cmd, cal_prep);
  auto* win_opt = calibrate_cmd->add_option("-w,--window", cal_window, "reference window 'begin_s,end_s'");
  calibrate_cmd->add_option("-a,--annotations", cal_annotations, "annotations CSV")->excludes(win_opt)
      ->check(CLI::ExistingFile);
  calibrate_cmd->add_option("-p,--pass", cal_pass, "annotated pass to calibrate on");
  calibrate_cmd->add_option("--min-weight", cal_min_weight, "drop stripes lighter than this");
  calibrate_cmd->add_option("-o,--output", cal_out, "model JSON (default stdout)");

  InputOpts det_in;
  std::string det_model, det_params, det_out, det_annotations, det_norm;
  auto* detect_cmd = app.add_subcommand("detect", "slide a calibrated model over a trip");
  add_input(detect_cmd, det_in);
  detect_cmd->add_option("-m,--model", det_model, "model JSON from calibrate")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--params", det_params, "detector parameter JSON")->check(CLI::ExistingFile);
  detect_cmd->add_option("--normalization", det_norm, "bounds used at calibration")->check(CLI::ExistingFile);
  detect_cmd->add_option("-a,--annotations", det_annotations, "score against this annotations CSV")
      ->check(CLI::ExistingFile);
  detect_cmd->add_option("-o,--output", det_out, "detections CSV (default stdout)");

  InputOpts geo_in;
  std::string geo_fences, geo_out, geo_annotations;
  double geo_gap = 2.0;
  auto* geofence_cmd = app.add_subcommand("geofence", "GPS geofence baseline detector");
  add_input(geofence_cmd, geo_in);
  geofence_cmd->add_option("--fences", geo_fences, "fences JSON")->required()->check(CLI::ExistingFile);
  geofence_cmd->add_option("--gap", geo_gap, "largest gap in seconds inside one detection");
  geofence_cmd->add_option("-a,--annotations", geo_annotations, "score against this annotations CSV")
      ->check(CLI::ExistingFile);
  geofence_cmd->add_option("-o,--output", geo_out, "detections CSV (default stdout)");

  std::string eval_det, eval_ann, eval_span, eval_trip;
  int eval_freq = 100;
  auto* eval_cmd = app.add_subcommand("eval", "score detections against annotations");
  eval_cmd->add_option("-d,--detections", eval_det, "detections CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-a,--annotations", eval_ann, "annotations CSV")->required()->check(CLI::ExistingFile);
  auto* span_opt = eval_cmd->add_option("--span", eval_span, "trip span 'begin_s,end_s'");
  eval_cmd->add_option("-t,--trip", eval_trip, "trip CSV providing the span")->excludes(span_opt)
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("-f,--frequency", eval_freq, "declared rate of the trip CSV");

  InputOpts grid_in;
  std::string grid_config, grid_annotations, grid_fences, grid_out = "report";
  unsigned grid_workers = 0;
  auto* grid_cmd = app.add_subcommand("grid", "run the configuration grid and write results.csv and timeline.svg");
  add_input(grid_cmd, grid_in);
  grid_cmd->add_option("-c,--config", grid_config, "grid config JSON")->check(CLI::ExistingFile);
  grid_cmd->add_option("-a,--annotations", grid_annotations, "annotations CSV")->required()->check(CLI::ExistingFile);
  grid_cmd->add_option("--fences", grid_fences, "fences JSON for the geofence baseline")->check(CLI::ExistingFile);
  grid_cmd->add_option("-o,--out", grid_out, "output directory");
  grid_cmd->add_option("-j,--workers", grid_workers, "worker threads (default SFCMD_WORKERS or all cores)");

  std::string synth_script, synth_out = "trip", synth_oversize;
  bool synth_reference = false;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic trip with annotations and fences");
  auto* script_opt = synth_cmd->add_option("--script", synth_script, "trip script JSON")->check(CLI::ExistingFile);
  synth_cmd->add_flag("--reference", synth_reference, "the built-in 17-pass reference trip")->excludes(script_opt);
  synth_cmd->add_option("--oversize", synth_oversize, "also write fences_oversized.json with this fence enlarged");
  synth_cmd->add_option("-o,--out", synth_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) {
      const TimeSeries trip = load_trip(enc_in);
      const CodeStream codes = encode_trip(trip, config_of(enc_prep), settings_of(enc_prep));
      std::ostringstream out;
      out << "timestamp_us,code\n";
      for (std::size_t i = 0; i < codes.size(); ++i) out << codes.timestamp(i) << ',' << codes.codes[i] << '\n';
      emit(enc_out, out.str());
    } else if (*calibrate_cmd) {
      const TimeSeries trip = load_trip(cal_in);
      const ExperimentConfig c = config_of(cal_prep);
      const PipelineSettings s = settings_of(cal_prep);
      Interval window;
      if (!cal_window.empty()) {
        window = parse_window(cal_window);
      } else if (!cal_annotations.empty()) {
        const auto annotations = annotations_from_csv(read_text(cal_annotations));
        window = find_pass(annotations, cal_pass).span;
      } else {
        throw Error(ErrorKind::invalid_argument, "calibrate needs --window or --annotations");
      }
      ModelFile file;
      file.model = calibrate(encode_trip(trip, c, s).slice(window), cal_min_weight);
      file.signals = c.signals;
      file.frequency_hz = c.frequency_hz;
      file.normalized = c.normalized;
      emit(cal_out, model_to_json(file));
    } else if (*detect_cmd) {
      const TimeSeries trip = load_trip(det_in);
      const ModelFile file = model_from_json(read_text(det_model));
      if (file.signals.empty()) throw Error(ErrorKind::invalid_argument, "model file does not name its signals");
      ExperimentConfig c;
      c.kind = file.model.kind;
      c.signals = file.signals;
      c.frequency_hz = file.frequency_hz.value_or(trip.frequency());
      c.normalized = file.normalized.value_or(true);
      PipelineSettings s;
      s.bits = file.model.grid.bits();
      if (!det_norm.empty()) s.normalization = normalization_from_json(read_text(det_norm));
      TimeSeries prepared = prepare_series(trip, c, s);
      const CodeStream codes = encode_series(prepared, file.model.kind, file.model.grid);
      const DetectorParams params = det_params.empty() ? DetectorParams{} : detector_from_json(read_text(det_params));
      const auto detections = detect(codes, file.model, params, c.id());
      emit(det_out, detections_to_csv(detections));
      if (!det_annotations.empty()) {
        const auto annotations = annotations_from_csv(read_text(det_annotations));
        print_metrics(c.id(), score(detections, annotations, trip.span()));
      }
    } else if (*geofence_cmd) {
      const TimeSeries trip = load_trip(geo_in);
      const auto fences = fences_from_json(read_text(geo_fences));
      const TimeSeries gps = trip.frequency() == 20 ? trip : downsample(trip, 20);
      const auto detections = detect_geofence(gps, fences, default_gps_grid(), GeofenceParams{geo_gap});
      emit(geo_out, detections_to_csv(detections));
      if (!geo_annotations.empty()) {
        const auto annotations = annotations_from_csv(read_text(geo_annotations));
        print_metrics("geofence", score(detections, annotations, trip.span()));
      }
    } else if (*eval_cmd) {
      const auto detections = detections_from_csv(read_text(eval_det));
      const auto annotations = annotations_from_csv(read_text(eval_ann));
      Interval span;
      if (!eval_span.empty()) {
        span = parse_window(eval_span);
      } else if (!eval_trip.empty()) {
        span = load_trip({eval_trip, eval_freq}).span();
      } else {
        for (const auto& a : annotations) span.end = std::max(span.end, a.span.end);
        for (const auto& d : detections) span.end = std::max(span.end, d.span.end);
      }
      print_metrics(fs::path(eval_det).stem().string(), score(detections, annotations, span));
    } else if (*grid_cmd) {
      const TimeSeries trip = load_trip(grid_in);
      const auto annotations = annotations_from_csv(read_text(grid_annotations));
      const GridConfig cfg = grid_config.empty() ? GridConfig{} : grid_config_from_json(read_text(grid_config));
      std::vector<Geofence> fences;
      if (!grid_fences.empty()) fences = fences_from_json(read_text(grid_fences));
      const auto configs = enumerate_grid(cfg.request);
      const GridReport report = run_grid(trip, annotations, configs, cfg.settings, fences, grid_workers);
      emit_report(report, grid_out);
      std::size_t failed = 0;
      for (const auto& r : report.rows) failed += r.ok ? 0 : 1;
      std::printf("%zu configurations, %zu failed, %.2f s -> %s\n", configs.size(), failed, report.elapsed_s,
                  grid_out.c_str());
      for (std::size_t i = 0; i < report.rows.size() && i < 10; ++i) {
        print_metrics(report.rows[i].id, report.rows[i].metrics);
      }
    } else if (*synth_cmd) {
      synth::TripScript script;
      if (synth_reference) {
        script = synth::reference_script();
      } else if (!synth_script.empty()) {
        script = synth::script_from_json(read_text(synth_script));
      } else {
        throw Error(ErrorKind::invalid_argument, "synth needs --script or --reference");
      }
      const synth::SynthOutput trip = synth::generate(script);
      fs::create_directories(synth_out);
      write_csv(trip.series, fs::path(synth_out) / "trip.csv");
      write_text(fs::path(synth_out) / "annotations.csv", annotations_to_csv(trip.annotations));
      write_text(fs::path(synth_out) / "fences.json", fences_to_json(trip.fences));
      if (!synth_oversize.empty()) {
        std::vector<Geofence> fences = trip.fences;
        for (Geofence& f : fences) {
          if (f.id() == synth_oversize) f = synth::oversized_fence(trip, synth_oversize);
        }
        write_text(fs::path(synth_out) / "fences_oversized.json", fences_to_json(fences));
      }
      std::printf("%zu samples at %d Hz, %zu passes, %zu fences -> %s\n", trip.series.size(),
                  trip.series.frequency(), trip.annotations.size(), trip.fences.size(), synth_out.c_str());
    }
  } catch (const Error& e) {
    std::cerr << "sfcmd: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sfcmd: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
