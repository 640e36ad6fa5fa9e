// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/experiment.hpp"

#include <fstream>
#include <sstream>

#include "sabf/error.hpp"
#include "sabf/image_io.hpp"
#include "test_support.hpp"

namespace sabf {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ReproduceConfig tiny_config() {
  ReproduceConfig config;
  config.scenes = {"two_channels"};
  config.frames = 12;
  config.repeats = 2;
  config.ensembles = {6, 12};
  config.patterns = {AperturePattern{1}, AperturePattern{2}};
  config.timing_runs = 2;
  config.timing_frames = 4;
  return config;
}

TEST(MetricsCsv, HeaderAndFormatting) {
  MetricsReport report;
  report.rows.push_back({"pd_cc", "channel", 25, 12.5, 0.25, 3.0, std::nan(""), 5});
  EXPECT_EQ(metrics_csv(report),
            "pipeline,roi,ensemble,snr_db,snr_sd,cnr_db,cnr_sd\n"
            "pd_cc,channel,25,12.500000,0.250000,3.000000,nan\n");
  EXPECT_EQ(report.find("pd_cc", "channel", 25).samples, 5u);
  EXPECT_THROW((void)report.find("pd_cc", "channel", 50), ValidationError);
}

TEST(TimingCsv, HeaderAndFormatting) {
  EXPECT_EQ(timing_csv({{"samas", "total", 1.5, 0.125}}),
            "pipeline,stage,mean_ms,sd_ms\nsamas,total,1.500000,0.125000\n");
  EXPECT_EQ(timing_csv({}), "pipeline,stage,mean_ms,sd_ms\n");
}

TEST(DefaultClutter, DependsOnContrastMode) {
  EXPECT_EQ(default_clutter(ContrastMode::amplitude_modulation).kind, ClutterFilterKind::rolling);
  EXPECT_EQ(default_clutter(ContrastMode::linear).kind, ClutterFilterKind::svd);
  EXPECT_FALSE(default_clutter(ContrastMode::linear).svd.has_value());
}

TEST(PipelineLabel, JoinsNameAndPattern) {
  EXPECT_EQ(pipeline_label(PipelineKind::samas, AperturePattern{2}), "samas@1100");
  EXPECT_EQ(pipeline_label(PipelineKind::asap, AperturePattern{1}), "asap@10");
}

TEST(ReproduceTables, RejectsBadConfigurations) {
  auto config = tiny_config();
  config.ensembles = {6, 6};
  EXPECT_THROW(reproduce_tables(config), ValidationError);
  config = tiny_config();
  config.ensembles = {24};
  EXPECT_THROW(reproduce_tables(config), ValidationError);
  config = tiny_config();
  config.scenes = {"nope"};
  EXPECT_THROW(reproduce_tables(config), ValidationError);
  config = tiny_config();
  config.repeats = 0;
  EXPECT_THROW(reproduce_tables(config), ValidationError);
}

TEST(ReproduceTables, TablesCoverEveryPipelineAndPattern) {
  auto config = tiny_config();
  config.output_dir = testing::scratch_dir();
  const auto report = reproduce_tables(config);
  ASSERT_EQ(report.scenes.size(), 1u);
  const auto& scene = report.scenes[0];
  EXPECT_EQ(scene.rolling_windows.size() + scene.clutter_ranks.size(), 2u);

  const auto pairs = pair_rois(make_scene("two_channels", desk_config(), 12, 1).rois);
  for (const auto& pair : pairs) {
    for (std::size_t e : {6u, 12u}) {
      for (auto kind : all_pipelines()) {
        const auto& row = scene.table1.find(std::string(pipeline_name(kind)), pair.label, e);
        // Two repeats with 12 / e blocks each.
        EXPECT_LE(row.samples, 2 * (12 / e));
        if (!uses_subapertures(kind)) continue;
        for (auto pattern : config.patterns) {
          EXPECT_NO_THROW((void)scene.table2.find(pipeline_label(kind, pattern), pair.label, e));
        }
      }
    }
  }
  EXPECT_EQ(scene.table1.rows.size(), pairs.size() * 2 * 5);
  EXPECT_EQ(scene.table2.rows.size(), pairs.size() * 2 * 3 * 2);

  const auto& dir = config.output_dir;
  EXPECT_EQ(slurp(dir / "two_channels_table1.csv"), metrics_csv(scene.table1));
  EXPECT_EQ(slurp(dir / "two_channels_table2.csv"), metrics_csv(scene.table2));
  EXPECT_EQ(slurp(dir / "timing.csv"), timing_csv(report.timing));
  EXPECT_TRUE(std::filesystem::exists(dir / "two_channels_samas_12.sbp"));
  EXPECT_TRUE(std::filesystem::exists(dir / "two_channels_samas_6_mask.pgm"));
  const auto image = read_power_image(dir / "two_channels_pd_cc_6.sbp");
  EXPECT_EQ(image.ensemble_length, 6u);
  for (const auto& path : report.written) EXPECT_TRUE(std::filesystem::exists(path)) << path;
  EXPECT_EQ(report.timing.size(), 5u * 8u);
}

TEST(ReproduceTables, RepeatRunsAreIdentical) {
  auto config = tiny_config();
  config.timing_runs = 0;
  config.repeats = 1;
  const auto a = reproduce_tables(config);
  const auto b = reproduce_tables(config);
  EXPECT_EQ(metrics_csv(a.scenes[0].table1), metrics_csv(b.scenes[0].table1));
  EXPECT_EQ(metrics_csv(a.scenes[0].table2), metrics_csv(b.scenes[0].table2));
  EXPECT_TRUE(a.timing.empty());
  EXPECT_TRUE(a.written.empty());
}

}  // namespace
}  // namespace sabf
