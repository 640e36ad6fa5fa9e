// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sabf/acquisition.hpp"
#include "sabf/images.hpp"
#include "sabf/simulator.hpp"

namespace sabf {

struct RoiStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  std::size_t count = 0;
};

RoiStats roi_stats(const PowerImage& image, const Roi& roi);

/// 10 log10(mu_A / mu_B). ROIs must lie in the grid, be disjoint and cover at
/// least 16 pixels each. Throws NumericalError "empty noise region" when
/// mu_B == 0.
double compute_snr(const PowerImage& image, const Roi& signal, const Roi& noise);

/// 10 log10(|mu_A - mu_B| / sigma_B). Throws NumericalError when sigma_B == 0
/// or the contrast is zero.
double compute_cnr(const PowerImage& image, const Roi& signal, const Roi& background);

/// `n` bilinear samples from p0 to p1 in dB relative to the image maximum,
/// floored at -300 dB. Throws ValidationError for endpoints outside the grid
/// or n < 2, NumericalError for an all-zero image.
std::vector<double> line_profile(const PowerImage& image, Vec2 p0, Vec2 p1, std::size_t n);

struct RoiPair {
  std::string label;
  Roi signal;
  Roi background;
};

/// Pairs every ROI "<name>" with "<name>_bg", falling back to a shared ROI
/// labelled "bg". ROIs without a background are skipped.
std::vector<RoiPair> pair_rois(const std::vector<Roi>& rois);

}  // namespace sabf
