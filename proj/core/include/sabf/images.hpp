// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sabf/acquisition.hpp"

namespace sabf {

using cdouble = std::complex<double>;

/// A sequence of images on one grid, stored (frame, pixel) row-major.
template <typename T>
struct FrameSeries {
  ImageGrid grid;
  std::size_t frames = 0;
  std::vector<T> values;

  static FrameSeries zeros(const ImageGrid& grid, std::size_t frames) {
    return FrameSeries{grid, frames, std::vector<T>(frames * grid.pixel_count(), T{})};
  }
  [[nodiscard]] std::size_t pixels() const { return grid.pixel_count(); }
  [[nodiscard]] std::span<const T> frame(std::size_t f) const {
    return {values.data() + f * pixels(), pixels()};
  }
  [[nodiscard]] std::span<T> frame(std::size_t f) {
    return {values.data() + f * pixels(), pixels()};
  }
};

using ComplexFrames = FrameSeries<cdouble>;
using RealFrames = FrameSeries<double>;

/// Half-open frame interval [begin, begin + length).
struct EnsembleRange {
  std::size_t begin = 0;
  std::size_t length = 0;

  [[nodiscard]] std::size_t end() const { return begin + length; }
  /// Throws ValidationError if empty or not within [0, frames).
  void check(std::size_t frames) const;

  static EnsembleRange all(std::size_t frames) { return {0, frames}; }
};

/// Non-negative real per-pixel power map, the output of every pipeline.
struct PowerImage {
  ImageGrid grid;
  std::vector<double> values;
  std::size_t ensemble_length = 0;

  [[nodiscard]] double max() const;
};

}  // namespace sabf
