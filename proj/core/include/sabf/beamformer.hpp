// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sabf/acquisition.hpp"
#include "sabf/images.hpp"

namespace sabf {

enum class ApodWindow { rectangular, hann, tukey };

/// Receive apodization. The window spans the active aperture of each pixel;
/// with f_number > 0 element e is active iff |x - x_e| <= z / (2 f_number),
/// with f_number == 0 the whole array is always active.
struct ApodizationSpec {
  ApodWindow window = ApodWindow::rectangular;
  double alpha = 0.5;  // Tukey taper fraction
  double f_number = 0.0;

  void validate() const;
  bool operator==(const ApodizationSpec&) const = default;
};

enum class Normalization {
  active_weight_sum,  // divide by the sum of active weights per pixel
  none,
};

/// Element selection over the receive aperture.
struct ApertureMask {
  std::vector<std::uint8_t> active;
  std::string name;

  static ApertureMask all(std::size_t num_elements);
  [[nodiscard]] std::size_t size() const { return active.size(); }
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool operator[](std::size_t e) const { return active[e] != 0; }
};

/// Complex beamformed images indexed (frame, angle, pixel).
struct AnalyticImageStack {
  ImageGrid grid;
  std::vector<double> angle_list;
  std::size_t frames = 0;
  std::vector<cdouble> values;

  static AnalyticImageStack zeros(const ImageGrid& grid, std::vector<double> angles,
                                  std::size_t frames);
  [[nodiscard]] std::size_t angles() const { return angle_list.size(); }
  [[nodiscard]] std::size_t pixels() const { return grid.pixel_count(); }
  [[nodiscard]] std::span<const cdouble> image(std::size_t frame, std::size_t angle) const {
    return {values.data() + (frame * angles() + angle) * pixels(), pixels()};
  }
  [[nodiscard]] std::span<cdouble> image(std::size_t frame, std::size_t angle) {
    return {values.data() + (frame * angles() + angle) * pixels(), pixels()};
  }
  /// Throws ValidationError on inconsistent dimensions or non-finite values.
  void check() const;
};

/// Precomputed delay and weight tables for one (config, grid, apodization).
/// `beamform` evaluates several element masks from one pass over the traces,
/// so sub-aperture images share the analytic conversion and delays of the
/// full aperture. Safe to share read-only between threads.
class DasEngine {
 public:
  DasEngine(const AcquisitionConfig& config, const ImageGrid& grid, const ApodizationSpec& apod);

  [[nodiscard]] const ImageGrid& grid() const { return grid_; }
  [[nodiscard]] const AcquisitionConfig& config() const { return config_; }

  /// Analytic traces of one transmit, (element, sample) row-major.
  [[nodiscard]] std::vector<cdouble> analytic_traces(const ChannelDataSet& data, std::size_t frame,
                                                     std::size_t angle) const;

  /// One image per mask into `out[m]` (each pixel_count long) from analytic
  /// traces sampled at `t0` with `sample_count` samples per element.
  void beamform(std::span<const cdouble> traces, std::size_t sample_count, double t0,
                std::size_t angle, std::span<const ApertureMask> masks,
                std::span<const std::span<cdouble>> out, Normalization norm) const;

 private:
  AcquisitionConfig config_;
  ImageGrid grid_;
  ApodizationSpec apod_;
  std::vector<double> rx_delay_;  // (pixel, element), seconds
  std::vector<double> weight_;    // (pixel, element), 0 outside the active aperture
  std::vector<double> tx_delay_;  // (angle, pixel), seconds
};

/// Complex image of one (frame, angle). Delays outside the sampled window
/// contribute zero. Throws ValidationError for an all-zero mask or a mask of
/// the wrong length.
std::vector<cdouble> das_beamform(const ChannelDataSet& data, const ImageGrid& grid,
                                  const ApodizationSpec& apod, std::size_t frame, std::size_t angle,
                                  const ApertureMask* mask = nullptr,
                                  Normalization norm = Normalization::active_weight_sum);

/// das_beamform over every (frame, angle).
AnalyticImageStack beamform_stack(const ChannelDataSet& data, const ImageGrid& grid,
                                  const ApodizationSpec& apod, const ApertureMask* mask = nullptr,
                                  Normalization norm = Normalization::active_weight_sum);

/// One stack per mask from a single pass over the data.
std::vector<AnalyticImageStack> beamform_stacks(
    const ChannelDataSet& data, const ImageGrid& grid, const ApodizationSpec& apod,
    std::span<const ApertureMask> masks, Normalization norm = Normalization::active_weight_sum);

}  // namespace sabf
