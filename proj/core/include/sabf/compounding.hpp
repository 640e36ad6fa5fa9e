// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "sabf/beamformer.hpp"
#include "sabf/images.hpp"
#include "sabf/simulator.hpp"

namespace sabf {

/// Pair term of angular multiply-and-sum for the product p = y_a * y_b:
///   as_printed   sign(p) |p|        (which is just p)
///   signed_sqrt  sign(p) sqrt(|p|)
enum class FmasVariant { as_printed, signed_sqrt };

/// Per frame, the pixel-wise sum over angles.
ComplexFrames coherent_compound(const AnalyticImageStack& stack);

/// Per frame and pixel, the sum over angle pairs a < b of the FMAS pair term
/// of the real (RF) parts. Pairs are accumulated in ascending (a, b) order.
/// Throws ValidationError for fewer than 2 angles.
RealFrames fmas_compound(const AnalyticImageStack& stack,
                         FmasVariant variant = FmasVariant::signed_sqrt);

/// FMAS of one pixel's per-angle values.
double fmas_value(std::span<const double> values, FmasVariant variant);

/// full - half1 - half2, element-wise. Throws ValidationError on a shape
/// mismatch.
TraceSet am_combine(const TraceSet& half1, const TraceSet& full, const TraceSet& half2);

/// Pixel-wise mean of |value|^2 over the ensemble.
PowerImage power_doppler(const ComplexFrames& frames, EnsembleRange ensemble);
PowerImage power_doppler(const RealFrames& frames, EnsembleRange ensemble);

}  // namespace sabf
