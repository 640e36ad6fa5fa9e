// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

// sabf: simulate, beamform, score and time plane-wave power Doppler pipelines.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_options.hpp"
#include "sabf/config_io.hpp"
#include "sabf/dataset_io.hpp"
#include "sabf/error.hpp"
#include "sabf/experiment.hpp"
#include "sabf/image_io.hpp"
#include "sabf/metrics.hpp"
#include "sabf/pipeline.hpp"
#include "sabf/scenes.hpp"
#include "sabf/simulator.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sabf::cli {
namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;

  [[nodiscard]] KeyValues values() const {
    KeyValues kv;
    if (!config_file.empty()) kv = read_key_values(config_file);
    apply_overrides(kv, overrides);
    check_known_keys(kv);
    return kv;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_file, "key = value configuration file");
  cmd->add_option("--set", common.overrides, "override a configuration key (key=value)");
}

json key_values_json(const KeyValues& kv) {
  json out = json::object();
  for (const auto& [k, v] : kv) out[k] = v;
  return out;
}

json acquisition_json(const AcquisitionConfig& config) {
  std::istringstream in(config_to_key_values(config));
  return key_values_json(parse_key_values(in));
}

void write_manifest(const fs::path& path, const std::string& command,
                    const std::vector<std::string>& argv, json body) {
  body["tool"] = "sabf";
  body["version"] = SABF_VERSION;
  body["command"] = command;
  body["argv"] = argv;
  write_file_atomic(path, body.dump(2) + "\n");
}

ContrastMode parse_mode(const std::string& mode) {
  if (mode == "linear") return ContrastMode::linear;
  if (mode == "am") return ContrastMode::amplitude_modulation;
  throw ValidationError("mode is linear or am");
}

std::string mode_name(ContrastMode mode) { return mode == ContrastMode::linear ? "linear" : "am"; }

std::vector<PipelineKind> parse_pipelines(const std::string& list) {
  if (list.empty() || list == "all") return all_pipelines();
  std::vector<PipelineKind> out;
  for (const auto& name : split_list(list)) out.push_back(parse_pipeline(name));
  return out;
}

EnsembleRange parse_ensemble(const std::string& text, std::size_t frames) {
  if (text.empty()) return EnsembleRange::all(frames);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("ensemble is begin:length");
  const auto begin = parse_integer(text.substr(0, colon), "ensemble begin");
  const auto length = parse_integer(text.substr(colon + 1), "ensemble length");
  if (begin < 0 || length <= 0) throw ValidationError("ensemble begin >= 0 and length >= 1");
  return {static_cast<std::size_t>(begin), static_cast<std::size_t>(length)};
}

PipelineOptions pipeline_options(const KeyValues& kv, const ImageGrid& grid, ContrastMode mode) {
  PipelineOptions options;
  options.grid = grid;
  options.clutter = default_clutter(mode);
  apply_pipeline_keys(kv, options);
  return options;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string scene = "two_channels";
  std::string scene_file;
  std::string mode;
  std::size_t frames = 200;
  std::uint64_t seed = 1;
  std::string output;
  std::string write_scene;
  std::string write_rois;
};

int run_simulate(const SimulateArgs& args, const std::vector<std::string>& argv) {
  const auto kv = args.common.values();
  const auto config = validate_config(config_from_key_values(kv, desk_config()));
  SceneSetup setup;
  if (!args.scene_file.empty()) {
    setup.name = fs::path(args.scene_file).stem().string();
    setup.scene = read_scene(args.scene_file);
    setup.grid = desk_grid();
    if (const auto it = kv.find("grid"); it != kv.end()) setup.grid = parse_grid(it->second);
    setup.mode = parse_mode(args.mode.empty() ? "linear" : args.mode);
  } else {
    setup = make_scene(args.scene, config, args.frames, args.seed);
    if (!args.mode.empty()) setup.mode = parse_mode(args.mode);
  }
  const auto data = simulate_scene(setup, config, PulseSpec{}, args.frames);
  write_dataset(data, args.output);
  std::vector<std::string> outputs{args.output};
  if (!args.write_scene.empty()) {
    write_file_atomic(args.write_scene, format_scene(setup.scene));
    outputs.push_back(args.write_scene);
  }
  if (!args.write_rois.empty()) {
    write_file_atomic(args.write_rois, format_rois(setup.rois));
    outputs.push_back(args.write_rois);
  }
  json body;
  body["scene"] = setup.name;
  body["mode"] = mode_name(setup.mode);
  body["frames"] = args.frames;
  body["seed"] = args.seed;
  body["scene_rng_seed"] = setup.scene.rng_seed;
  body["scatterers"] = setup.scene.scatterers.size();
  body["acquisition"] = acquisition_json(config);
  body["grid"] = format_grid(setup.grid);
  body["sample_count"] = data.sample_count;
  body["t0"] = data.t0;
  body["outputs"] = outputs;
  write_manifest(args.output + ".manifest.json", "simulate", argv, body);
  std::cout << "wrote " << args.output << " (" << data.frames << " frames, " << data.angles()
            << " angles, " << data.elements() << " elements, " << data.sample_count
            << " samples)\n";
  return 0;
}

// --- beamform --------------------------------------------------------------

struct BeamformArgs {
  Common common;
  std::string dataset;
  std::string pipelines = "all";
  std::string mode = "linear";
  std::string ensemble;
  std::string out_dir = ".";
  std::string name;
  double dynamic_range_db = 50.0;
};

int run_beamform(const BeamformArgs& args, const std::vector<std::string>& argv) {
  const auto kv = args.common.values();
  const auto data = read_dataset(args.dataset);
  auto options = pipeline_options(kv, desk_grid(), parse_mode(args.mode));
  options.ensemble = parse_ensemble(args.ensemble, data.frames);
  const auto kinds = parse_pipelines(args.pipelines);
  const auto results = run_pipelines(data, kinds, options);
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);
  const std::string stem = args.name.empty() ? fs::path(args.dataset).stem().string() : args.name;
  std::vector<std::string> outputs;
  json timing = json::object();
  for (const auto& r : results) {
    const std::string base =
        stem + "_" + std::string(pipeline_name(r.kind)) + "_" + std::to_string(r.frames);
    const auto sbp = dir / (base + ".sbp");
    write_power_image(r.image, sbp);
    outputs.push_back(sbp.string());
    if (r.image.max() > 0.0) {
      const auto pgm = dir / (base + ".pgm");
      export_image(r.image, args.dynamic_range_db, pgm);
      outputs.push_back(pgm.string());
    }
    if (r.mask) {
      const auto mask = dir / (base + "_mask.pgm");
      export_mask(*r.mask, mask);
      outputs.push_back(mask.string());
    }
    timing[std::string(pipeline_name(r.kind))] = {{"load_ms", r.times.load},
                                                  {"beamform_ms", r.times.beamform}};
    std::cout << pipeline_name(r.kind) << ": " << base << " (max " << r.image.max() << ")\n";
  }
  json body;
  body["dataset"] = args.dataset;
  body["acquisition"] = acquisition_json(data.config);
  body["options"] = key_values_json(kv);
  body["grid"] = format_grid(options.grid);
  body["pattern"] = options.pattern.name();
  body["ensemble"] = {options.ensemble->begin, options.ensemble->length};
  body["dynamic_range_db"] = args.dynamic_range_db;
  body["beamform_passes"] = results.empty() ? 0 : results.front().beamform_passes;
  body["timing"] = timing;
  body["outputs"] = outputs;
  write_manifest(dir / (stem + ".manifest.json"), "beamform", argv, body);
  return 0;
}

// --- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::string roi_file;
  std::vector<std::string> images;
  std::string output;
};

int run_metrics(const MetricsArgs& args, const std::vector<std::string>& argv) {
  const auto pairs = pair_rois(read_rois(args.roi_file));
  if (pairs.empty()) {
    throw ValidationError(
        "ROI file pairs no signal region with a background ('<name>_bg' or 'bg')");
  }
  MetricsReport report;
  for (const auto& path : args.images) {
    const auto image = read_power_image(path);
    for (const auto& pair : pairs) {
      MetricRow row;
      row.pipeline = fs::path(path).stem().string();
      row.roi = pair.label;
      row.ensemble = image.ensemble_length;
      row.snr_db = compute_snr(image, pair.signal, pair.background);
      row.cnr_db = compute_cnr(image, pair.signal, pair.background);
      row.samples = 1;
      report.rows.push_back(row);
    }
  }
  const auto csv = metrics_csv(report);
  if (args.output.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(args.output, csv);
    json body;
    body["rois"] = args.roi_file;
    body["images"] = args.images;
    body["outputs"] = {args.output};
    write_manifest(args.output + ".manifest.json", "metrics", argv, body);
  }
  return 0;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  Common common;
  std::string dataset;
  std::string scene = "two_channels";
  std::size_t frames = 50;
  std::uint64_t seed = 1;
  std::size_t runs = 5;
  std::string pipelines = "pd_cc,pd_fmas,asap,samas";
  std::string output;
};

int run_bench(const BenchArgs& args, const std::vector<std::string>& argv) {
  const auto kv = args.common.values();
  ChannelDataSet data;
  ImageGrid grid = desk_grid();
  ContrastMode mode = ContrastMode::linear;
  if (!args.dataset.empty()) {
    data = read_dataset(args.dataset);
  } else {
    const auto config = validate_config(config_from_key_values(kv, desk_config()));
    const auto setup = make_scene(args.scene, config, args.frames, args.seed);
    grid = setup.grid;
    mode = setup.mode;
    data = simulate_scene(setup, config, PulseSpec{}, args.frames);
  }
  if (args.runs < 5) throw ValidationError("bench needs >= 5 runs");
  const auto options = pipeline_options(kv, grid, mode);
  const auto rows = time_pipelines(data, parse_pipelines(args.pipelines), options, args.runs);
  const auto csv = timing_csv(rows);
  if (args.output.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(args.output, csv);
    json body;
    body["dataset"] = args.dataset.empty() ? args.scene : args.dataset;
    body["frames"] = data.frames;
    body["seed"] = args.seed;
    body["runs"] = args.runs;
    body["options"] = key_values_json(kv);
    body["outputs"] = {args.output};
    write_manifest(args.output + ".manifest.json", "bench", argv, body);
  }
  return 0;
}

// --- reproduce -------------------------------------------------------------

struct ReproduceArgs {
  Common common;
  std::string out_dir;
  std::string scenes = "two_channels,grating_lobe";
  std::size_t frames = 200;
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  std::string ensembles = "25,50,100,200";
  std::string patterns = "10,1100,11110000";
  std::size_t timing_runs = 5;
  std::size_t timing_frames = 50;
  double dynamic_range_db = 50.0;
  bool quiet = false;
};

int run_reproduce(const ReproduceArgs& args, const std::vector<std::string>& argv) {
  const auto kv = args.common.values();
  ReproduceConfig config;
  config.acquisition = validate_config(config_from_key_values(kv, desk_config()));
  config.scenes = split_list(args.scenes);
  config.frames = args.frames;
  config.repeats = args.repeats;
  config.seed = args.seed;
  config.ensembles.clear();
  for (const auto& e : split_list(args.ensembles)) {
    const auto v = parse_integer(e, "ensemble");
    if (v <= 0) throw ValidationError("ensemble lengths must be positive");
    config.ensembles.push_back(static_cast<std::size_t>(v));
  }
  config.patterns.clear();
  for (const auto& p : split_list(args.patterns))
    config.patterns.push_back(AperturePattern::parse(p));
  PipelineOptions overrides;
  const bool clutter_set = kv.contains("clutter");
  apply_pipeline_keys(kv, overrides);
  config.apod = overrides.apod;
  config.variant = overrides.variant;
  config.suppressor = overrides.suppressor;
  if (clutter_set) config.clutter = overrides.clutter;
  config.timing_runs = args.timing_runs;
  config.timing_frames = args.timing_frames;
  config.dynamic_range_db = args.dynamic_range_db;
  config.output_dir = args.out_dir;
  if (!args.quiet) config.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };

  const auto report = reproduce_tables(config);

  for (const auto& scene : report.scenes) {
    std::cout << "== " << scene.scene << " (ensemble " << config.ensembles.back() << ")\n";
    for (const auto& row : scene.table1.rows) {
      if (row.ensemble != config.ensembles.back()) continue;
      std::cout << "  " << row.pipeline << " " << row.roi << ": SNR " << row.snr_db << " +- "
                << row.snr_sd << " dB, CNR " << row.cnr_db << " +- " << row.cnr_sd << " dB\n";
    }
  }
  json body;
  body["acquisition"] = acquisition_json(config.acquisition);
  body["options"] = key_values_json(kv);
  body["scenes"] = config.scenes;
  body["frames"] = config.frames;
  body["repeats"] = config.repeats;
  body["seeds"] = json::array();
  for (std::size_t r = 0; r < config.repeats; ++r) body["seeds"].push_back(config.seed + r);
  body["ensembles"] = config.ensembles;
  json patterns = json::array();
  for (const auto& p : config.patterns) patterns.push_back(p.name());
  body["patterns"] = patterns;
  body["variant"] = config.variant == FmasVariant::signed_sqrt ? "signed_sqrt" : "as_printed";
  body["suppressor"] = config.suppressor == SuppressorMode::binary ? "binary" : "smooth";
  json clutter = json::object();
  for (const auto& scene : report.scenes) {
    clutter[scene.scene] = {{"svd_low_cut", scene.clutter_ranks},
                            {"rolling_window", scene.rolling_windows}};
  }
  body["clutter"] = clutter;
  std::vector<std::string> outputs;
  for (const auto& p : report.written) outputs.push_back(p.filename().string());
  body["outputs"] = outputs;
  write_manifest(fs::path(args.out_dir) / "manifest.json", "reproduce", argv, body);
  return 0;
}

}  // namespace
}  // namespace sabf::cli

int main(int argc, char** argv) {
  using namespace sabf::cli;
  const std::vector<std::string> args_copy(argv, argv + argc);
  CLI::App app{"Plane-wave power Doppler beamforming toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SABF_VERSION);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a scene into a channel-data file");
  add_common(simulate, sim.common);
  simulate->add_option("--scene", sim.scene, "built-in scene name");
  simulate->add_option("--scene-file", sim.scene_file, "scatterer file");
  simulate->add_option("--mode", sim.mode, "linear or am (default: the scene's)");
  simulate->add_option("--frames", sim.frames, "frame count");
  simulate->add_option("--seed", sim.seed, "scene and noise seed");
  simulate->add_option("-o,--output", sim.output, "dataset path")->required();
  simulate->add_option("--write-scene", sim.write_scene, "also write the scatterer list");
  simulate->add_option("--write-rois", sim.write_rois, "also write the scene's ROI file");

  BeamformArgs bf;
  auto* beamform = app.add_subcommand("beamform", "Form power images from a dataset");
  add_common(beamform, bf.common);
  beamform->add_option("dataset", bf.dataset, "dataset path")->required();
  beamform->add_option("--pipelines", bf.pipelines, "comma list or 'all'");
  beamform->add_option(
      "--mode", bf.mode,
      "acquisition mode selecting the default clutter filter (linear: svd, am: rolling)");
  beamform->add_option("--ensemble", bf.ensemble, "begin:length (default: all frames)");
  beamform->add_option("--out-dir", bf.out_dir, "output directory");
  beamform->add_option("--name", bf.name, "output file stem (default: dataset stem)");
  beamform->add_option("--dynamic-range", bf.dynamic_range_db, "display dynamic range, dB");

  MetricsArgs met;
  auto* metrics = app.add_subcommand("metrics", "SNR and CNR of power images over ROIs");
  metrics->add_option("--roi", met.roi_file, "ROI file")->required();
  metrics->add_option("images", met.images, ".sbp power images")->required();
  metrics->add_option("-o,--output", met.output, "CSV path (default: stdout)");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Per-stage timing of the pipelines");
  add_common(bench, be.common);
  bench->add_option("--dataset", be.dataset, "dataset path (default: simulate --scene)");
  bench->add_option("--scene", be.scene, "built-in scene to simulate");
  bench->add_option("--frames", be.frames, "frames to simulate");
  bench->add_option("--seed", be.seed, "simulation seed");
  bench->add_option("--runs", be.runs, "timed runs per pipeline (>= 5)");
  bench->add_option("--pipelines", be.pipelines, "comma list or 'all'");
  bench->add_option("-o,--output", be.output, "CSV path (default: stdout)");

  ReproduceArgs rep;
  auto* reproduce = app.add_subcommand("reproduce", "Run the full comparison and write tables");
  add_common(reproduce, rep.common);
  reproduce->add_option("--out-dir", rep.out_dir, "output directory")->required();
  reproduce->add_option("--scenes", rep.scenes, "comma list of scenes");
  reproduce->add_option("--frames", rep.frames, "frames per acquisition");
  reproduce->add_option("--repeats", rep.repeats, "independent acquisitions per scene");
  reproduce->add_option("--seed", rep.seed, "first seed");
  reproduce->add_option("--ensembles", rep.ensembles, "comma list of ensemble lengths");
  reproduce->add_option("--patterns", rep.patterns, "comma list of aperture patterns");
  reproduce->add_option("--timing-runs", rep.timing_runs, "timing runs (0 skips timing)");
  reproduce->add_option("--timing-frames", rep.timing_frames, "frames used for timing");
  reproduce->add_option("--dynamic-range", rep.dynamic_range_db, "display dynamic range, dB");
  reproduce->add_flag("-q,--quiet", rep.quiet, "no progress messages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return run_simulate(sim, args_copy);
    if (*beamform) return run_beamform(bf, args_copy);
    if (*metrics) return run_metrics(met, args_copy);
    if (*bench) return run_bench(be, args_copy);
    if (*reproduce) return run_reproduce(rep, args_copy);
  } catch (const sabf::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sabf::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const sabf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
