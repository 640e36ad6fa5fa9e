// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/experiment.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "sabf/config_io.hpp"
#include "sabf/error.hpp"
#include "sabf/image_io.hpp"

namespace sabf {

namespace {

struct Samples {
  std::vector<double> snr;
  std::vector<double> cnr;
};

using SampleKey = std::tuple<std::string, std::string, std::size_t>;

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {std::nan(""), std::nan("")};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size() - 1))};
}

/// Rows in insertion order of `order`.
MetricsReport aggregate(const std::map<SampleKey, Samples>& samples,
                        const std::vector<SampleKey>& order) {
  MetricsReport report;
  for (const auto& key : order) {
    const auto& s = samples.at(key);
    MetricRow row;
    std::tie(row.pipeline, row.roi, row.ensemble) = key;
    std::tie(row.snr_db, row.snr_sd) = mean_sd(s.snr);
    std::tie(row.cnr_db, row.cnr_sd) = mean_sd(s.cnr);
    row.samples = std::min(s.snr.size(), s.cnr.size());
    report.rows.push_back(row);
  }
  return report;
}

class Collector {
 public:
  void add(const std::string& pipeline, const RoiPair& pair, std::size_t ensemble,
           const PowerImage& image) {
    const SampleKey key{pipeline, pair.label, ensemble};
    auto [it, inserted] = samples_.try_emplace(key);
    if (inserted) order_.push_back(key);
    try {
      it->second.snr.push_back(compute_snr(image, pair.signal, pair.background));
    } catch (const NumericalError&) {
    }
    try {
      it->second.cnr.push_back(compute_cnr(image, pair.signal, pair.background));
    } catch (const NumericalError&) {
    }
  }
  [[nodiscard]] MetricsReport report() const { return aggregate(samples_, order_); }

 private:
  std::map<SampleKey, Samples> samples_;
  std::vector<SampleKey> order_;
};

std::string format_metric(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << v;
  return out.str();
}

ChannelDataSet first_frames(const ChannelDataSet& data, std::size_t frames) {
  ChannelDataSet out = data;
  out.frames = std::min(frames, data.frames);
  out.samples.resize(out.frames * data.angles() * data.elements() * data.sample_count);
  return out;
}

}  // namespace

const MetricRow& MetricsReport::find(const std::string& pipeline, const std::string& roi,
                                     std::size_t ensemble) const {
  for (const auto& r : rows) {
    if (r.pipeline == pipeline && r.roi == roi && r.ensemble == ensemble) return r;
  }
  throw ValidationError("no metrics for " + pipeline + " / " + roi + " / " +
                        std::to_string(ensemble));
}

std::string metrics_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "pipeline,roi,ensemble,snr_db,snr_sd,cnr_db,cnr_sd\n";
  for (const auto& r : report.rows) {
    out << r.pipeline << ',' << r.roi << ',' << r.ensemble << ',' << format_metric(r.snr_db) << ','
        << format_metric(r.snr_sd) << ',' << format_metric(r.cnr_db) << ','
        << format_metric(r.cnr_sd) << '\n';
  }
  return out.str();
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream out;
  out << "pipeline,stage,mean_ms,sd_ms\n";
  for (const auto& r : rows) {
    out << r.pipeline << ',' << r.stage << ',' << format_metric(r.mean_ms) << ','
        << format_metric(r.sd_ms) << '\n';
  }
  return out.str();
}

ClutterSpec default_clutter(ContrastMode mode) {
  ClutterSpec spec;
  spec.kind = mode == ContrastMode::amplitude_modulation ? ClutterFilterKind::rolling
                                                         : ClutterFilterKind::svd;
  return spec;
}

std::string pipeline_label(PipelineKind kind, AperturePattern pattern) {
  return std::string(pipeline_name(kind)) + "@" + pattern.name();
}

ChannelDataSet simulate_scene(const SceneSetup& setup, const AcquisitionConfig& config,
                              const PulseSpec& pulse, std::size_t frames) {
  SequenceOptions options;
  options.mode = setup.mode;
  options.depth_range = std::make_pair(setup.grid.z_min, setup.grid.z_max);
  return synthesize_sequence(setup.scene, config, pulse, frames, options);
}

ReproduceReport reproduce_tables(const ReproduceConfig& config) {
  if (config.scenes.empty()) throw ValidationError("reproduce needs >= 1 scene");
  if (config.repeats == 0) throw ValidationError("reproduce needs >= 1 repeat");
  if (config.patterns.empty()) throw ValidationError("reproduce needs >= 1 aperture pattern");
  for (std::size_t i = 0; i < config.ensembles.size(); ++i) {
    if (config.ensembles[i] == 0 || config.ensembles[i] > config.frames) {
      throw ValidationError("ensemble lengths must lie in [1, frames]");
    }
    if (i > 0 && config.ensembles[i] <= config.ensembles[i - 1]) {
      throw ValidationError("ensemble lengths must be strictly increasing");
    }
  }
  const auto acquisition = validate_config(config.acquisition);
  const bool write = !config.output_dir.empty();
  if (write) std::filesystem::create_directories(config.output_dir);
  const auto say = [&](const std::string& msg) {
    if (config.progress) config.progress(msg);
  };

  ReproduceReport report;
  const auto kinds = all_pipelines();
  std::optional<ChannelDataSet> timing_data;
  std::optional<PipelineOptions> timing_options;

  for (const auto& scene_name : config.scenes) {
    SceneReport scene_report;
    scene_report.scene = scene_name;
    Collector table1;
    Collector table2;
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
      const auto setup = make_scene(scene_name, acquisition, config.frames, config.seed + rep);
      const auto pairs = pair_rois(setup.rois);
      say(scene_name + ": simulating repeat " + std::to_string(rep + 1) + "/" +
          std::to_string(config.repeats));
      const auto data = simulate_scene(setup, acquisition, config.pulse, config.frames);

      PipelineOptions options;
      options.grid = setup.grid;
      options.apod = config.apod;
      options.pattern = config.patterns.front();
      options.variant = config.variant;
      options.suppressor = config.suppressor;
      options.clutter = config.clutter.value_or(default_clutter(setup.mode));

      const auto filtered = filter_channel_data(data, options.clutter);
      if (filtered.kind == ClutterFilterKind::svd) {
        scene_report.clutter_ranks.push_back(filtered.thresholds.low_cut);
      } else if (filtered.kind == ClutterFilterKind::rolling) {
        scene_report.rolling_windows.push_back(filtered.rolling_window);
      }
      if (!timing_data && config.timing_runs > 0) {
        timing_data = first_frames(data, config.timing_frames);
        timing_options = options;
      }
      say(scene_name + ": beamforming repeat " + std::to_string(rep + 1));
      const auto series = form_series(filtered.data, setup.grid, config.apod, config.variant,
                                      SeriesRequest::for_pipelines(kinds, config.patterns),
                                      EnsembleRange::all(data.frames));

      for (const std::size_t length : config.ensembles) {
        const std::size_t blocks = config.frames / length;
        for (std::size_t b = 0; b < blocks; ++b) {
          const EnsembleRange ensemble{b * length, length};
          const bool keep_images = write && rep == 0 && b == 0;
          const auto record = [&](const std::string& label, const PipelineImage& result,
                                  Collector& into) {
            for (const auto& pair : pairs) into.add(label, pair, length, result.image);
            if (!keep_images) return;
            const auto stem =
                config.output_dir / (scene_name + "_" + label + "_" + std::to_string(length));
            auto pgm = stem;
            pgm += ".pgm";
            auto sbp = stem;
            sbp += ".sbp";
            if (result.image.max() > 0.0) {
              export_image(result.image, config.dynamic_range_db, pgm);
              report.written.push_back(pgm);
            }
            write_power_image(result.image, sbp);
            report.written.push_back(sbp);
            if (result.mask) {
              auto mask = stem;
              mask += "_mask.pgm";
              export_mask(*result.mask, mask);
              report.written.push_back(mask);
            }
          };
          for (auto kind : kinds) {
            record(std::string(pipeline_name(kind)),
                   evaluate_pipeline(series, kind, options, ensemble), table1);
          }
          for (const auto& pattern : config.patterns) {
            PipelineOptions per_pattern = options;
            per_pattern.pattern = pattern;
            for (auto kind : kinds) {
              if (!uses_subapertures(kind)) continue;
              const auto label = pipeline_label(kind, pattern);
              const auto result = evaluate_pipeline(series, kind, per_pattern, ensemble);
              for (const auto& pair : pairs) table2.add(label, pair, length, result.image);
            }
          }
        }
      }
    }
    scene_report.table1 = table1.report();
    scene_report.table2 = table2.report();
    if (write) {
      const auto t1 = config.output_dir / (scene_name + "_table1.csv");
      const auto t2 = config.output_dir / (scene_name + "_table2.csv");
      write_file_atomic(t1, metrics_csv(scene_report.table1));
      write_file_atomic(t2, metrics_csv(scene_report.table2));
      report.written.push_back(t1);
      report.written.push_back(t2);
    }
    report.scenes.push_back(std::move(scene_report));
  }

  if (timing_data) {
    say("timing " + std::to_string(config.timing_runs) + " runs");
    timing_options->ensemble.reset();
    report.timing = time_pipelines(*timing_data, kinds, *timing_options, config.timing_runs);
    if (write) {
      const auto path = config.output_dir / "timing.csv";
      write_file_atomic(path, timing_csv(report.timing));
      report.written.push_back(path);
    }
  }
  return report;
}

}  // namespace sabf
