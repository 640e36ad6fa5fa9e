// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/compounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sabf/error.hpp"

namespace sabf {

namespace {

inline double pair_term(double p, FmasVariant variant) {
  if (variant == FmasVariant::as_printed) {
    return (p > 0.0) ? std::abs(p) : (p < 0.0 ? -std::abs(p) : 0.0);
  }
  const double r = std::sqrt(std::abs(p));
  return (p > 0.0) ? r : (p < 0.0 ? -r : 0.0);
}

template <typename T>
PowerImage mean_square(const FrameSeries<T>& frames, EnsembleRange ensemble) {
  ensemble.check(frames.frames);
  PowerImage out{frames.grid, std::vector<double>(frames.pixels(), 0.0), ensemble.length};
  for (std::size_t f = ensemble.begin; f < ensemble.end(); ++f) {
    const auto image = frames.frame(f);
    for (std::size_t p = 0; p < image.size(); ++p) out.values[p] += std::norm(image[p]);
  }
  const double scale = 1.0 / static_cast<double>(ensemble.length);
  for (auto& v : out.values) v *= scale;
  return out;
}

}  // namespace

void EnsembleRange::check(std::size_t frames) const {
  if (length == 0) throw ValidationError("empty ensemble");
  if (end() > frames) {
    throw ValidationError("ensemble [" + std::to_string(begin) + ", " + std::to_string(end()) +
                          ") exceeds " + std::to_string(frames) + " frames");
  }
}

double PowerImage::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

ComplexFrames coherent_compound(const AnalyticImageStack& stack) {
  if (stack.angles() == 0) throw ValidationError("compounding requires >= 1 angle");
  auto out = ComplexFrames::zeros(stack.grid, stack.frames);
  for (std::size_t f = 0; f < stack.frames; ++f) {
    auto dst = out.frame(f);
    for (std::size_t a = 0; a < stack.angles(); ++a) {
      const auto src = stack.image(f, a);
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += src[p];
    }
  }
  return out;
}

RealFrames fmas_compound(const AnalyticImageStack& stack, FmasVariant variant) {
  const std::size_t n_ang = stack.angles();
  if (n_ang < 2) throw ValidationError("FMAS requires >= 2 angles");
  auto out = RealFrames::zeros(stack.grid, stack.frames);
  for (std::size_t f = 0; f < stack.frames; ++f) {
    auto dst = out.frame(f);
    for (std::size_t a = 0; a + 1 < n_ang; ++a) {
      const auto ya = stack.image(f, a);
      for (std::size_t b = a + 1; b < n_ang; ++b) {
        const auto yb = stack.image(f, b);
        for (std::size_t p = 0; p < dst.size(); ++p) {
          dst[p] += pair_term(ya[p].real() * yb[p].real(), variant);
        }
      }
    }
  }
  return out;
}

double fmas_value(std::span<const double> values, FmasVariant variant) {
  if (values.size() < 2) throw ValidationError("FMAS requires >= 2 angles");
  double sum = 0.0;
  for (std::size_t a = 0; a + 1 < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      sum += pair_term(values[a] * values[b], variant);
    }
  }
  return sum;
}

TraceSet am_combine(const TraceSet& half1, const TraceSet& full, const TraceSet& half2) {
  const auto same_shape = [](const TraceSet& a, const TraceSet& b) {
    return a.elements == b.elements && a.samples == b.samples && a.values.size() == b.values.size();
  };
  if (!same_shape(half1, full) || !same_shape(half2, full)) {
    throw ValidationError("AM pulses differ in shape");
  }
  TraceSet out = TraceSet::zeros(full.elements, full.samples);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = full.values[i] - half1.values[i] - half2.values[i];
  }
  return out;
}

PowerImage power_doppler(const ComplexFrames& frames, EnsembleRange ensemble) {
  return mean_square(frames, ensemble);
}

PowerImage power_doppler(const RealFrames& frames, EnsembleRange ensemble) {
  return mean_square(frames, ensemble);
}

}  // namespace sabf
