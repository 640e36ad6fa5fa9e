// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/beamformer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "sabf/analytic.hpp"
#include "sabf/error.hpp"

namespace sabf {

namespace {

double window_value(const ApodizationSpec& apod, double u) {
  switch (apod.window) {
    case ApodWindow::rectangular:
      return 1.0;
    case ApodWindow::hann:
      return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * u);
    case ApodWindow::tukey: {
      const double a = apod.alpha;
      if (a <= 0.0) return 1.0;
      if (u < 0.5 * a) return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u / a));
      if (u > 1.0 - 0.5 * a) return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (1.0 - u) / a));
      return 1.0;
    }
  }
  return 1.0;
}

AnalyticTransformer& transformer_for(std::size_t length) {
  thread_local std::unique_ptr<AnalyticTransformer> cached;
  if (!cached || cached->length() != length) cached = std::make_unique<AnalyticTransformer>(length);
  return *cached;
}

void check_mask(const ApertureMask& mask, std::size_t num_elements) {
  if (mask.size() != num_elements) {
    throw ValidationError("aperture mask has " + std::to_string(mask.size()) +
                          " entries, expected " + std::to_string(num_elements));
  }
  if (mask.count() == 0) throw ValidationError("aperture mask selects no elements");
}

}  // namespace

void ApodizationSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("apodization alpha in [0, 1]");
  if (!(f_number >= 0.0) || !std::isfinite(f_number)) throw ValidationError("f_number >= 0");
}

ApertureMask ApertureMask::all(std::size_t num_elements) {
  return {std::vector<std::uint8_t>(num_elements, 1), "full"};
}

std::size_t ApertureMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(active.begin(), active.end(), [](std::uint8_t v) { return v != 0; }));
}

AnalyticImageStack AnalyticImageStack::zeros(const ImageGrid& grid, std::vector<double> angles,
                                             std::size_t frames) {
  AnalyticImageStack s{grid, std::move(angles), frames, {}};
  s.values.assign(frames * s.angles() * grid.pixel_count(), cdouble{});
  return s;
}

void AnalyticImageStack::check() const {
  grid.validate();
  if (values.size() != frames * angles() * pixels()) {
    throw ValidationError("image stack size does not match frames x angles x pixels");
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("image stack holds a non-finite value");
    }
  }
}

DasEngine::DasEngine(const AcquisitionConfig& config, const ImageGrid& grid,
                     const ApodizationSpec& apod)
    : config_(validate_config(config)), grid_(grid), apod_(apod) {
  grid_.validate();
  apod_.validate();
  const std::size_t n_el = config_.num_elements;
  const std::size_t n_px = grid_.pixel_count();
  const double c = config_.sound_speed;
  rx_delay_.resize(n_px * n_el);
  weight_.assign(n_px * n_el, 0.0);
  for (std::size_t iz = 0; iz < grid_.nz; ++iz) {
    const double z = grid_.z(iz);
    for (std::size_t ix = 0; ix < grid_.nx; ++ix) {
      const double x = grid_.x(ix);
      const std::size_t p = iz * grid_.nx + ix;
      const double half_aperture = apod_.f_number > 0.0 ? z / (2.0 * apod_.f_number) : 0.0;
      for (std::size_t e = 0; e < n_el; ++e) {
        const double xe = config_.element_x(e);
        rx_delay_[p * n_el + e] = std::hypot(x - xe, z) / c;
        double u = 0.0;
        if (apod_.f_number > 0.0) {
          if (std::abs(x - xe) > half_aperture) continue;
          u = half_aperture > 0.0 ? (xe - (x - half_aperture)) / (2.0 * half_aperture) : 0.5;
        } else {
          u = n_el > 1 ? static_cast<double>(e) / static_cast<double>(n_el - 1) : 0.5;
        }
        weight_[p * n_el + e] = window_value(apod_, u);
      }
    }
  }
  const std::size_t n_ang = config_.angle_count();
  tx_delay_.resize(n_ang * n_px);
  for (std::size_t a = 0; a < n_ang; ++a) {
    const double ct = std::cos(config_.angles[a]);
    const double st = std::sin(config_.angles[a]);
    for (std::size_t iz = 0; iz < grid_.nz; ++iz) {
      for (std::size_t ix = 0; ix < grid_.nx; ++ix) {
        tx_delay_[a * n_px + iz * grid_.nx + ix] = (grid_.z(iz) * ct + grid_.x(ix) * st) / c;
      }
    }
  }
}

std::vector<cdouble> DasEngine::analytic_traces(const ChannelDataSet& data, std::size_t frame,
                                                std::size_t angle) const {
  const std::size_t n = data.sample_count;
  std::vector<cdouble> out(data.elements() * n);
  if (n == 0) return out;
  auto& transformer = transformer_for(n);
  for (std::size_t e = 0; e < data.elements(); ++e) {
    transformer.transform(data.trace(frame, angle, e), std::span(out).subspan(e * n, n));
  }
  return out;
}

void DasEngine::beamform(std::span<const cdouble> traces, std::size_t sample_count, double t0,
                         std::size_t angle, std::span<const ApertureMask> masks,
                         std::span<const std::span<cdouble>> out, Normalization norm) const {
  const std::size_t n_el = config_.num_elements;
  const std::size_t n_px = grid_.pixel_count();
  const std::size_t n_masks = masks.size();
  if (angle >= config_.angle_count()) throw ValidationError("angle index out of range");
  if (out.size() != n_masks) throw ValidationError("one output image per mask required");
  if (traces.size() != n_el * sample_count) throw ValidationError("trace block size mismatch");
  for (std::size_t m = 0; m < n_masks; ++m) {
    check_mask(masks[m], n_el);
    if (out[m].size() != n_px) throw ValidationError("output image size mismatch");
  }
  const double fs = config_.sampling_frequency;
  const double last = static_cast<double>(sample_count) - 1.0;
  const double* tx = tx_delay_.data() + angle * n_px;
  std::vector<cdouble> acc(n_masks);
  std::vector<double> wsum(n_masks);
  for (std::size_t p = 0; p < n_px; ++p) {
    std::fill(acc.begin(), acc.end(), cdouble{});
    std::fill(wsum.begin(), wsum.end(), 0.0);
    const double* rx = rx_delay_.data() + p * n_el;
    const double* w = weight_.data() + p * n_el;
    for (std::size_t e = 0; e < n_el; ++e) {
      if (w[e] == 0.0) continue;
      for (std::size_t m = 0; m < n_masks; ++m) {
        if (masks[m].active[e]) wsum[m] += w[e];
      }
      const double pos = (tx[p] + rx[e] - t0) * fs;
      if (!(pos >= 0.0 && pos <= last)) continue;
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      const cdouble* tr = traces.data() + e * sample_count;
      const cdouble s = (i + 1 < sample_count) ? tr[i] * (1.0 - frac) + tr[i + 1] * frac : tr[i];
      const cdouble ws = w[e] * s;
      for (std::size_t m = 0; m < n_masks; ++m) {
        if (masks[m].active[e]) acc[m] += ws;
      }
    }
    for (std::size_t m = 0; m < n_masks; ++m) {
      if (norm == Normalization::active_weight_sum) {
        out[m][p] = wsum[m] > 0.0 ? acc[m] / wsum[m] : cdouble{};
      } else {
        out[m][p] = acc[m];
      }
    }
  }
}

std::vector<cdouble> das_beamform(const ChannelDataSet& data, const ImageGrid& grid,
                                  const ApodizationSpec& apod, std::size_t frame, std::size_t angle,
                                  const ApertureMask* mask, Normalization norm) {
  if (frame >= data.frames) throw ValidationError("frame index out of range");
  const DasEngine engine(data.config, grid, apod);
  const ApertureMask full = ApertureMask::all(data.elements());
  const ApertureMask& used = mask ? *mask : full;
  std::vector<cdouble> image(grid.pixel_count());
  const auto traces = engine.analytic_traces(data, frame, angle);
  const std::span<cdouble> outs[] = {image};
  engine.beamform(traces, data.sample_count, data.t0, angle, std::span(&used, 1), outs, norm);
  return image;
}

std::vector<AnalyticImageStack> beamform_stacks(const ChannelDataSet& data, const ImageGrid& grid,
                                                const ApodizationSpec& apod,
                                                std::span<const ApertureMask> masks,
                                                Normalization norm) {
  const DasEngine engine(data.config, grid, apod);
  std::vector<AnalyticImageStack> stacks;
  for (std::size_t m = 0; m < masks.size(); ++m) {
    check_mask(masks[m], data.elements());
    stacks.push_back(AnalyticImageStack::zeros(grid, data.config.angles, data.frames));
  }
  std::vector<std::span<cdouble>> outs(masks.size());
  for (std::size_t f = 0; f < data.frames; ++f) {
    for (std::size_t a = 0; a < data.angles(); ++a) {
      const auto traces = engine.analytic_traces(data, f, a);
      for (std::size_t m = 0; m < masks.size(); ++m) outs[m] = stacks[m].image(f, a);
      engine.beamform(traces, data.sample_count, data.t0, a, masks, outs, norm);
    }
  }
  return stacks;
}

AnalyticImageStack beamform_stack(const ChannelDataSet& data, const ImageGrid& grid,
                                  const ApodizationSpec& apod, const ApertureMask* mask,
                                  Normalization norm) {
  const ApertureMask full = ApertureMask::all(data.elements());
  auto stacks = beamform_stacks(data, grid, apod, std::span(mask ? mask : &full, 1), norm);
  return std::move(stacks.front());
}

}  // namespace sabf
