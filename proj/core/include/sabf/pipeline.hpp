// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sabf/beamformer.hpp"
#include "sabf/clutter.hpp"
#include "sabf/compounding.hpp"
#include "sabf/images.hpp"
#include "sabf/subaperture.hpp"

namespace sabf {

enum class PipelineKind { pd_cc, pd_fmas, asap, asap_fmas, samas };

std::string_view pipeline_name(PipelineKind kind);
/// Throws ValidationError for an unknown name.
PipelineKind parse_pipeline(std::string_view name);
std::vector<PipelineKind> all_pipelines();
/// Pipelines that split the receive aperture.
bool uses_subapertures(PipelineKind kind);

struct PipelineOptions {
  ImageGrid grid;
  ApodizationSpec apod;
  AperturePattern pattern;
  FmasVariant variant = FmasVariant::signed_sqrt;
  SuppressorMode suppressor = SuppressorMode::binary;
  AsapEstimator estimator = AsapEstimator::positive_real;
  ClutterSpec clutter;
  /// Frames the images are formed from; the whole dataset when absent.
  std::optional<EnsembleRange> ensemble;
};

/// Accumulated wall time per stage, in milliseconds.
struct StageTimes {
  double load = 0.0;         // clutter filtering and aperture split
  double das = 0.0;          // analytic conversion and delay-and-sum
  double sum = 0.0;          // coherent compounding over angles
  double fmas = 0.0;         // FMAS over angles
  double correlation = 0.0;  // sub-aperture correlation
  double averaging = 0.0;    // ensemble averaging into a power image
  double suppressor = 0.0;   // suppressor mask and gating
  double beamform = 0.0;     // everything after load

  StageTimes& operator+=(const StageTimes& other);
};

/// Per-frame compounded images for the full aperture and for each requested
/// sub-aperture pair, formed from one pass of DAS over the data.
struct BeamformedSeries {
  struct Split {
    AperturePattern pattern;
    ComplexFrames cc1, cc2;
    RealFrames fmas1, fmas2;
  };
  std::size_t first_frame = 0;
  ComplexFrames cc_full;
  RealFrames fmas_full;
  std::vector<Split> splits;
  StageTimes times;
  std::size_t beamform_passes = 0;

  [[nodiscard]] const Split& split(AperturePattern pattern) const;
};

struct SeriesRequest {
  bool cc_full = false;
  bool fmas_full = false;
  bool sub_cc = false;
  bool sub_fmas = false;
  std::vector<AperturePattern> patterns;

  /// Union of what `kinds` need for each of `patterns`.
  static SeriesRequest for_pipelines(const std::vector<PipelineKind>& kinds,
                                     const std::vector<AperturePattern>& patterns);
};

/// Beamforms frames [frames.begin, frames.end()) of `data` once and compounds
/// the requested series. Frames in the result are renumbered from 0.
BeamformedSeries form_series(const ChannelDataSet& data, const ImageGrid& grid,
                             const ApodizationSpec& apod, FmasVariant variant,
                             const SeriesRequest& request, EnsembleRange frames);

struct PipelineImage {
  PowerImage image;
  std::optional<SuppressorMask> mask;  // asap and samas
  StageTimes times;                    // evaluation stages only
};

/// Power image of one pipeline over `ensemble`, indexed within `series`.
PipelineImage evaluate_pipeline(const BeamformedSeries& series, PipelineKind kind,
                                const PipelineOptions& options, EnsembleRange ensemble);

struct PipelineResult {
  PipelineKind kind = PipelineKind::pd_cc;
  PowerImage image;
  std::optional<SuppressorMask> mask;
  StageTimes times;
  std::size_t frames = 0;
  std::size_t beamform_passes = 0;
};

/// The full path for one pipeline: clutter filter, aperture split, DAS,
/// angle combination, correlation or averaging, suppressor.
PipelineResult run_pipeline(const ChannelDataSet& data, PipelineKind kind,
                            const PipelineOptions& options);

/// Several pipelines sharing one clutter filter and one beamforming pass.
/// Shared stage times are reported on every result.
std::vector<PipelineResult> run_pipelines(const ChannelDataSet& data,
                                          const std::vector<PipelineKind>& kinds,
                                          const PipelineOptions& options);

struct TimingRow {
  std::string pipeline;
  std::string stage;
  double mean_ms = 0.0;  // per frame
  double sd_ms = 0.0;
};

/// Runs each pipeline `runs` times (serially) and reports mean and sample
/// standard deviation of ms per frame for every stage.
std::vector<TimingRow> time_pipelines(const ChannelDataSet& data,
                                      const std::vector<PipelineKind>& kinds,
                                      const PipelineOptions& options, std::size_t runs);

}  // namespace sabf
