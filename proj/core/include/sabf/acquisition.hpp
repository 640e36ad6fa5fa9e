// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sabf {

/// Transducer, transmit sequence and sampling parameters.
///
/// Coordinates: x is lateral along the array, z is depth, origin at the array
/// center. Element i sits at x_i = (i - (N - 1) / 2) * pitch.
struct AcquisitionConfig {
  std::size_t num_elements = 64;
  double pitch = 0.2e-3;               // m
  double center_frequency = 5.0e6;     // Hz
  double transmit_frequency = 5.0e6;   // Hz
  double sampling_frequency = 20.0e6;  // Hz
  double sound_speed = 1540.0;         // m/s
  std::vector<double> angles;          // rad, strictly increasing
  double prf = 10.0e3;                 // Hz
  double frame_rate = 150.0;           // Hz
  double tukey_alpha = 0.25;

  [[nodiscard]] double element_x(std::size_t element) const {
    return (static_cast<double>(element) - 0.5 * static_cast<double>(num_elements - 1)) * pitch;
  }
  [[nodiscard]] double aperture_width() const {
    return static_cast<double>(num_elements - 1) * pitch;
  }
  [[nodiscard]] double wavelength() const { return sound_speed / transmit_frequency; }
  [[nodiscard]] std::size_t angle_count() const { return angles.size(); }

  bool operator==(const AcquisitionConfig&) const = default;
};

/// Returns the config unchanged when every invariant holds, otherwise throws
/// ValidationError naming the first violated invariant.
AcquisitionConfig validate_config(AcquisitionConfig config);

/// `count` angles evenly spread over `span` radians, centered on zero.
std::vector<double> evenly_spaced_angles(std::size_t count, double span);

/// Small default used by tests and the built-in scenes: 64 elements, 0.2 mm
/// pitch, 5 MHz, 20 MHz sampling, 1540 m/s, 5 angles over 10 degrees.
AcquisitionConfig desk_config();

/// Raw per-element RF traces indexed (frame, angle, element, sample),
/// stored row-major as 32-bit floats.
struct ChannelDataSet {
  AcquisitionConfig config;
  std::size_t frames = 0;
  std::size_t sample_count = 0;
  double t0 = 0.0;  // time of sample 0 relative to transmit, s
  std::vector<float> samples;

  static ChannelDataSet zeros(AcquisitionConfig config, std::size_t frames,
                              std::size_t sample_count, double t0);

  [[nodiscard]] std::size_t angles() const { return config.angles.size(); }
  [[nodiscard]] std::size_t elements() const { return config.num_elements; }
  [[nodiscard]] std::size_t trace_offset(std::size_t frame, std::size_t angle,
                                         std::size_t element) const {
    return ((frame * angles() + angle) * elements() + element) * sample_count;
  }
  [[nodiscard]] std::span<const float> trace(std::size_t frame, std::size_t angle,
                                             std::size_t element) const {
    return {samples.data() + trace_offset(frame, angle, element), sample_count};
  }
  [[nodiscard]] std::span<float> trace(std::size_t frame, std::size_t angle, std::size_t element) {
    return {samples.data() + trace_offset(frame, angle, element), sample_count};
  }
  /// One (frame, angle) block of elements x samples.
  [[nodiscard]] std::span<const float> transmit(std::size_t frame, std::size_t angle) const {
    return {samples.data() + trace_offset(frame, angle, 0), elements() * sample_count};
  }
  [[nodiscard]] std::span<float> transmit(std::size_t frame, std::size_t angle) {
    return {samples.data() + trace_offset(frame, angle, 0), elements() * sample_count};
  }

  /// Throws ValidationError on a shape mismatch or a non-finite sample.
  void check() const;

  bool operator==(const ChannelDataSet&) const = default;
};

/// Pixel lattice for beamformed images. Endpoints are inclusive; pixels are
/// stored row-major with depth rows: index = iz * nx + ix.
struct ImageGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t nx = 1;
  std::size_t nz = 1;

  [[nodiscard]] std::size_t pixel_count() const { return nx * nz; }
  [[nodiscard]] double dx() const {
    return nx > 1 ? (x_max - x_min) / static_cast<double>(nx - 1) : 0.0;
  }
  [[nodiscard]] double dz() const {
    return nz > 1 ? (z_max - z_min) / static_cast<double>(nz - 1) : 0.0;
  }
  [[nodiscard]] double x(std::size_t ix) const { return x_min + dx() * static_cast<double>(ix); }
  [[nodiscard]] double z(std::size_t iz) const { return z_min + dz() * static_cast<double>(iz); }
  [[nodiscard]] bool contains(double x, double z) const {
    return x >= x_min && x <= x_max && z >= z_min && z <= z_max;
  }

  void validate() const;

  bool operator==(const ImageGrid&) const = default;
};

enum class RoiShape { rectangle, ellipse };

/// Region of interest used by the quality metrics.
struct Roi {
  std::string label;
  RoiShape shape = RoiShape::rectangle;
  double cx = 0.0;
  double cz = 0.0;
  double half_x = 0.0;
  double half_z = 0.0;

  [[nodiscard]] bool contains(double x, double z) const;
  /// Pixel indices of `grid` covered by the ROI. Throws ValidationError if the
  /// ROI is degenerate or not fully inside the grid.
  [[nodiscard]] std::vector<std::size_t> pixels(const ImageGrid& grid) const;
};

}  // namespace sabf
