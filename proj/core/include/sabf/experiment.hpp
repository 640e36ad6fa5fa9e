// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sabf/metrics.hpp"
#include "sabf/pipeline.hpp"
#include "sabf/scenes.hpp"
#include "sabf/simulator.hpp"

namespace sabf {

/// One CSV row: metrics for (pipeline, ROI pair, ensemble length) averaged
/// over independent non-overlapping ensembles.
struct MetricRow {
  std::string pipeline;
  std::string roi;
  std::size_t ensemble = 0;
  double snr_db = 0.0;
  double snr_sd = 0.0;
  double cnr_db = 0.0;
  double cnr_sd = 0.0;
  std::size_t samples = 0;  // ensembles that produced finite metrics
};

struct MetricsReport {
  std::vector<MetricRow> rows;

  /// Throws ValidationError if no row matches.
  [[nodiscard]] const MetricRow& find(const std::string& pipeline, const std::string& roi,
                                      std::size_t ensemble) const;
};

/// "pipeline,roi,ensemble,snr_db,snr_sd,cnr_db,cnr_sd" then one line per row.
std::string metrics_csv(const MetricsReport& report);
/// "pipeline,stage,mean_ms,sd_ms" then one line per row.
std::string timing_csv(const std::vector<TimingRow>& rows);

/// Clutter filter used for a scene when none is configured: rolling
/// subtraction (5 Hz cutoff) for amplitude-modulation data, SVD with the
/// knee-selected rank otherwise.
ClutterSpec default_clutter(ContrastMode mode);

struct ReproduceConfig {
  std::vector<std::string> scenes{"two_channels", "grating_lobe"};
  AcquisitionConfig acquisition = desk_config();
  PulseSpec pulse;
  std::size_t frames = 200;
  /// Independent acquisitions per scene, seeded seed, seed + 1, ...
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  std::vector<std::size_t> ensembles{25, 50, 100, 200};
  std::vector<AperturePattern> patterns{{1}, {2}, {4}};
  ApodizationSpec apod;
  FmasVariant variant = FmasVariant::signed_sqrt;
  SuppressorMode suppressor = SuppressorMode::binary;
  std::optional<ClutterSpec> clutter;
  double dynamic_range_db = 50.0;
  /// Per-stage timing on the first scene; skipped when timing_runs == 0.
  std::size_t timing_runs = 5;
  std::size_t timing_frames = 50;
  /// Where CSVs and images go; nothing is written when empty.
  std::filesystem::path output_dir;
  std::function<void(const std::string&)> progress;
};

struct SceneReport {
  std::string scene;
  MetricsReport table1;  // every pipeline, first aperture pattern
  MetricsReport table2;  // sub-aperture pipelines for every pattern, "name@pattern"
  std::vector<std::size_t> clutter_ranks;    // svd low_cut per repeat
  std::vector<std::size_t> rolling_windows;  // rolling W per repeat
};

struct ReproduceReport {
  std::vector<SceneReport> scenes;
  std::vector<TimingRow> timing;
  std::vector<std::filesystem::path> written;
};

/// Label of a sub-aperture pipeline under a pattern, e.g. "samas@1100".
std::string pipeline_label(PipelineKind kind, AperturePattern pattern);

/// Simulates each scene `repeats` times, runs all five pipelines over every
/// non-overlapping ensemble of each length and aggregates SNR and CNR per
/// ROI pair. Writes `<scene>_table1.csv`, `<scene>_table2.csv`,
/// `timing.csv`, and per pipeline and ensemble length (first repeat, first
/// block) `<scene>_<pipeline>_<ensemble>.pgm` plus the raw `.sbp` image and
/// suppressor masks `..._mask.pgm`.
ReproduceReport reproduce_tables(const ReproduceConfig& config);

/// Simulated channel data for a named scene.
ChannelDataSet simulate_scene(const SceneSetup& setup, const AcquisitionConfig& config,
                              const PulseSpec& pulse, std::size_t frames);

}  // namespace sabf
