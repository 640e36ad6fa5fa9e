// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sabf/error.hpp"

namespace sabf {

namespace {

constexpr std::size_t min_roi_pixels = 16;
constexpr double profile_floor_db = -300.0;

RoiStats stats_of(const PowerImage& image, const std::vector<std::size_t>& pixels) {
  RoiStats s;
  s.count = pixels.size();
  for (auto p : pixels) s.mean += image.values[p];
  s.mean /= static_cast<double>(s.count);
  for (auto p : pixels) {
    const double d = image.values[p] - s.mean;
    s.sd += d * d;
  }
  s.sd = std::sqrt(s.sd / static_cast<double>(s.count));
  return s;
}

std::pair<RoiStats, RoiStats> pair_stats(const PowerImage& image, const Roi& a, const Roi& b) {
  if (image.values.size() != image.grid.pixel_count()) {
    throw ValidationError("power image size does not match its grid");
  }
  auto pa = a.pixels(image.grid);
  auto pb = b.pixels(image.grid);
  if (pa.size() < min_roi_pixels || pb.size() < min_roi_pixels) {
    throw ValidationError("ROIs '" + a.label + "' and '" + b.label +
                          "' must each cover >= 16 pixels");
  }
  std::vector<std::size_t> common;
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(common));
  if (!common.empty()) {
    throw ValidationError("ROIs '" + a.label + "' and '" + b.label + "' overlap");
  }
  return {stats_of(image, pa), stats_of(image, pb)};
}

}  // namespace

RoiStats roi_stats(const PowerImage& image, const Roi& roi) {
  const auto pixels = roi.pixels(image.grid);
  if (pixels.empty()) throw ValidationError("ROI '" + roi.label + "' covers no pixels");
  return stats_of(image, pixels);
}

double compute_snr(const PowerImage& image, const Roi& signal, const Roi& noise) {
  const auto [a, b] = pair_stats(image, signal, noise);
  if (!(b.mean > 0.0)) throw NumericalError("empty noise region");
  if (!(a.mean > 0.0)) throw NumericalError("empty signal region");
  return 10.0 * std::log10(a.mean / b.mean);
}

double compute_cnr(const PowerImage& image, const Roi& signal, const Roi& background) {
  const auto [a, b] = pair_stats(image, signal, background);
  if (!(b.sd > 0.0)) throw NumericalError("zero background deviation");
  const double contrast = std::abs(a.mean - b.mean);
  if (!(contrast > 0.0)) throw NumericalError("zero contrast");
  return 10.0 * std::log10(contrast / b.sd);
}

std::vector<double> line_profile(const PowerImage& image, Vec2 p0, Vec2 p1, std::size_t n) {
  const ImageGrid& g = image.grid;
  if (n < 2) throw ValidationError("line profile needs >= 2 samples");
  if (!g.contains(p0.x, p0.z) || !g.contains(p1.x, p1.z)) {
    throw ValidationError("line profile endpoint outside the grid");
  }
  const double peak = image.max();
  if (!(peak > 0.0)) throw NumericalError("zero image");
  const auto at = [&](std::size_t ix, std::size_t iz) { return image.values[iz * g.nx + ix]; };
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = p0.x + t * (p1.x - p0.x);
    const double z = p0.z + t * (p1.z - p0.z);
    const double fx = g.nx > 1 ? (x - g.x_min) / g.dx() : 0.0;
    const double fz = g.nz > 1 ? (z - g.z_min) / g.dz() : 0.0;
    const auto ix = std::min(static_cast<std::size_t>(std::max(fx, 0.0)), g.nx > 1 ? g.nx - 2 : 0);
    const auto iz = std::min(static_cast<std::size_t>(std::max(fz, 0.0)), g.nz > 1 ? g.nz - 2 : 0);
    const double ux = g.nx > 1 ? std::clamp(fx - static_cast<double>(ix), 0.0, 1.0) : 0.0;
    const double uz = g.nz > 1 ? std::clamp(fz - static_cast<double>(iz), 0.0, 1.0) : 0.0;
    const std::size_t ix1 = g.nx > 1 ? ix + 1 : ix;
    const std::size_t iz1 = g.nz > 1 ? iz + 1 : iz;
    const double v = (1 - ux) * (1 - uz) * at(ix, iz) + ux * (1 - uz) * at(ix1, iz) +
                     (1 - ux) * uz * at(ix, iz1) + ux * uz * at(ix1, iz1);
    out[i] = v > 0.0 ? std::max(10.0 * std::log10(v / peak), profile_floor_db) : profile_floor_db;
  }
  return out;
}

std::vector<RoiPair> pair_rois(const std::vector<Roi>& rois) {
  const auto find = [&](const std::string& label) -> const Roi* {
    for (const auto& r : rois) {
      if (r.label == label) return &r;
    }
    return nullptr;
  };
  const Roi* shared = find("bg");
  std::vector<RoiPair> out;
  for (const auto& r : rois) {
    if (r.label == "bg" || (r.label.size() > 3 && r.label.ends_with("_bg"))) continue;
    const Roi* bg = find(r.label + "_bg");
    if (!bg) bg = shared;
    if (bg) out.push_back({r.label, r, *bg});
  }
  return out;
}

}  // namespace sabf
