// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sabf/beamformer.hpp"
#include "sabf/compounding.hpp"
#include "sabf/images.hpp"

namespace sabf {

/// Interleaving pattern of k ones followed by k zeros, repeated along the
/// array: k = 1 is [1 0], k = 2 is [1 1 0 0], k = 4 is [1 1 1 1 0 0 0 0].
struct AperturePattern {
  std::size_t run_length = 1;

  /// "10", "1100", "11110000", ...
  [[nodiscard]] std::string name() const;
  /// Accepts the name form or a bare run length ("1", "2", "4"). Strings of
  /// 0s and 1s longer than one character are read as names only.
  static AperturePattern parse(const std::string& text);
  bool operator==(const AperturePattern&) const = default;
};

/// Element e goes to the first mask iff floor(e / k) is even. Throws
/// ValidationError when num_elements < 2k.
std::pair<ApertureMask, ApertureMask> split_aperture(std::size_t num_elements,
                                                     AperturePattern pattern);

struct CorrelationImage {
  ImageGrid grid;
  std::vector<cdouble> values;
  std::size_t ensemble_length = 0;
};

/// Pixel-wise R = (1/N) sum_t y1(t) conj(y2(t)) over the ensemble.
CorrelationImage asap_correlate(const ComplexFrames& y1, const ComplexFrames& y2,
                                EnsembleRange ensemble);
/// Real-valued sequences; R is real.
CorrelationImage asap_correlate(const RealFrames& y1, const RealFrames& y2, EnsembleRange ensemble);

enum class AsapEstimator {
  positive_real,  // max(Re R, 0)
  magnitude,      // |R|, keeps anti-correlated energy
};

PowerImage asap_power(const CorrelationImage& r,
                      AsapEstimator estimator = AsapEstimator::positive_real);

enum class SuppressorMode { binary, smooth };

struct SuppressorMask {
  ImageGrid grid;
  std::vector<double> weights;
  SuppressorMode mode = SuppressorMode::binary;
};

/// binary: 1 where Re R > 0, else 0. smooth: max(0, cos arg R). R == 0 maps
/// to 0 in both modes.
SuppressorMask sidelobe_suppressor(const CorrelationImage& r,
                                   SuppressorMode mode = SuppressorMode::binary);

/// FMAS over angles of each sub-aperture stack, then the (real) correlation
/// of the two per-frame sequences.
CorrelationImage asap_fmas(const AnalyticImageStack& stack1, const AnalyticImageStack& stack2,
                           FmasVariant variant, EnsembleRange ensemble);

/// mask(R_asap) * max(R_af, 0), pixel-wise. Inputs must share a grid.
PowerImage samas_combine(const SuppressorMask& mask, const CorrelationImage& r_af);

/// Full sub-aperture multiply and sum: the plain ASAP correlation of the
/// coherently compounded sub-aperture stacks sets the suppressor, which gates
/// the positive part of asap_fmas.
PowerImage samas(const AnalyticImageStack& stack1, const AnalyticImageStack& stack2,
                 FmasVariant variant, EnsembleRange ensemble,
                 SuppressorMode mode = SuppressorMode::binary);

}  // namespace sabf
