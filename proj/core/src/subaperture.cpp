// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/subaperture.hpp"

#include <algorithm>
#include <cmath>

#include "sabf/error.hpp"

namespace sabf {

namespace {

template <typename T>
CorrelationImage correlate(const FrameSeries<T>& y1, const FrameSeries<T>& y2,
                           EnsembleRange ensemble) {
  if (!(y1.grid == y2.grid)) throw ValidationError("correlated images differ in grid");
  ensemble.check(std::min(y1.frames, y2.frames));
  CorrelationImage r{y1.grid, std::vector<cdouble>(y1.pixels()), ensemble.length};
  for (std::size_t f = ensemble.begin; f < ensemble.end(); ++f) {
    const auto a = y1.frame(f);
    const auto b = y2.frame(f);
    for (std::size_t p = 0; p < a.size(); ++p) r.values[p] += a[p] * std::conj(cdouble(b[p]));
  }
  const double scale = 1.0 / static_cast<double>(ensemble.length);
  for (auto& v : r.values) v *= scale;
  return r;
}

void check_pair(const AnalyticImageStack& s1, const AnalyticImageStack& s2) {
  if (!(s1.grid == s2.grid) || s1.angle_list != s2.angle_list || s1.frames != s2.frames) {
    throw ValidationError("sub-aperture stacks differ in grid, angles or frames");
  }
}

}  // namespace

std::string AperturePattern::name() const {
  return std::string(run_length, '1') + std::string(run_length, '0');
}

AperturePattern AperturePattern::parse(const std::string& text) {
  const bool binary =
      std::all_of(text.begin(), text.end(), [](char c) { return c == '0' || c == '1'; });
  if (binary && text.size() >= 2) {
    const auto ones = static_cast<std::size_t>(std::count(text.begin(), text.end(), '1'));
    const AperturePattern p{ones};
    if (ones > 0 && p.name() == text) return p;
  } else if (!text.empty() && text.size() <= 6 &&
             std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const auto k = std::stoul(text);
    if (k >= 1) return AperturePattern{k};
  }
  throw ValidationError("unknown aperture pattern '" + text + "'");
}

std::pair<ApertureMask, ApertureMask> split_aperture(std::size_t num_elements,
                                                     AperturePattern pattern) {
  const std::size_t k = pattern.run_length;
  if (k == 0) throw ValidationError("aperture pattern run length >= 1");
  if (num_elements < 2 * k) {
    throw ValidationError("aperture of " + std::to_string(num_elements) +
                          " elements is too small for pattern " + pattern.name());
  }
  ApertureMask first{std::vector<std::uint8_t>(num_elements, 0), pattern.name() + ":1"};
  ApertureMask second{std::vector<std::uint8_t>(num_elements, 0), pattern.name() + ":2"};
  for (std::size_t e = 0; e < num_elements; ++e) {
    if ((e / k) % 2 == 0) {
      first.active[e] = 1;
    } else {
      second.active[e] = 1;
    }
  }
  return {std::move(first), std::move(second)};
}

CorrelationImage asap_correlate(const ComplexFrames& y1, const ComplexFrames& y2,
                                EnsembleRange ensemble) {
  return correlate(y1, y2, ensemble);
}

CorrelationImage asap_correlate(const RealFrames& y1, const RealFrames& y2,
                                EnsembleRange ensemble) {
  return correlate(y1, y2, ensemble);
}

PowerImage asap_power(const CorrelationImage& r, AsapEstimator estimator) {
  PowerImage out{r.grid, std::vector<double>(r.values.size()), r.ensemble_length};
  for (std::size_t p = 0; p < r.values.size(); ++p) {
    out.values[p] = estimator == AsapEstimator::positive_real ? std::max(r.values[p].real(), 0.0)
                                                              : std::abs(r.values[p]);
  }
  return out;
}

SuppressorMask sidelobe_suppressor(const CorrelationImage& r, SuppressorMode mode) {
  SuppressorMask mask{r.grid, std::vector<double>(r.values.size(), 0.0), mode};
  for (std::size_t p = 0; p < r.values.size(); ++p) {
    const cdouble v = r.values[p];
    if (v == cdouble{}) continue;
    if (mode == SuppressorMode::binary) {
      mask.weights[p] = v.real() > 0.0 ? 1.0 : 0.0;
    } else {
      mask.weights[p] = std::clamp(v.real() / std::abs(v), 0.0, 1.0);
    }
  }
  return mask;
}

CorrelationImage asap_fmas(const AnalyticImageStack& stack1, const AnalyticImageStack& stack2,
                           FmasVariant variant, EnsembleRange ensemble) {
  check_pair(stack1, stack2);
  return asap_correlate(fmas_compound(stack1, variant), fmas_compound(stack2, variant), ensemble);
}

PowerImage samas_combine(const SuppressorMask& mask, const CorrelationImage& r_af) {
  if (!(mask.grid == r_af.grid) || mask.weights.size() != r_af.values.size()) {
    throw ValidationError("suppressor and correlation differ in grid");
  }
  PowerImage out{r_af.grid, std::vector<double>(r_af.values.size()), r_af.ensemble_length};
  for (std::size_t p = 0; p < out.values.size(); ++p) {
    out.values[p] = mask.weights[p] * std::max(r_af.values[p].real(), 0.0);
  }
  return out;
}

PowerImage samas(const AnalyticImageStack& stack1, const AnalyticImageStack& stack2,
                 FmasVariant variant, EnsembleRange ensemble, SuppressorMode mode) {
  check_pair(stack1, stack2);
  const auto r_asap =
      asap_correlate(coherent_compound(stack1), coherent_compound(stack2), ensemble);
  const auto mask = sidelobe_suppressor(r_asap, mode);
  return samas_combine(mask, asap_fmas(stack1, stack2, variant, ensemble));
}

}  // namespace sabf
