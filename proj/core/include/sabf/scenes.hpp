// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sabf/acquisition.hpp"
#include "sabf/simulator.hpp"

namespace sabf {

/// A ready-to-run experiment: scatterers, acquisition mode, the display grid
/// and the ROIs the metrics are evaluated on. ROI labels follow the pairing
/// convention of `pair_rois`: "<name>" is a signal region and "<name>_bg" its
/// background.
struct SceneSetup {
  std::string name;
  PhantomScene scene;
  ContrastMode mode = ContrastMode::linear;
  ImageGrid grid;
  std::vector<Roi> rois;
};

/// Built-in scenes for the desk configuration:
///   point_grid       - 3 x 3 static point targets, linear transmit
///   two_channels     - two parallel microbubble channels in cancelled tissue,
///                      amplitude-modulation transmit
///   tissue_plus_flow - strong static tissue plus weak moving scatterers
///   grating_lobe     - off-axis microbubble vessel beside an empty region
/// `n_frames` sizes the upstream reservoir of moving scatterers so the field
/// of view stays populated for the whole acquisition.
SceneSetup make_scene(std::string_view name, const AcquisitionConfig& config, std::size_t n_frames,
                      std::uint64_t seed);

std::vector<std::string> scene_names();

/// Default desk-scale imaging grid: x in [-5, 5] mm, z in [14, 26] mm.
ImageGrid desk_grid();

/// Scene text: `key = value` header lines (noise_sigma, rng_seed,
/// noise_gain_db_per_us) and one scatterer per line `x z amplitude vx vz gamma`
/// in SI units.
PhantomScene parse_scene(std::istream& in);
PhantomScene read_scene(const std::filesystem::path& path);
std::string format_scene(const PhantomScene& scene);

/// ROI text: one ROI per line `label shape cx cz dx dz`, shape is
/// `rect` or `ellipse`, lengths in meters.
std::vector<Roi> parse_rois(std::istream& in);
std::vector<Roi> read_rois(const std::filesystem::path& path);
std::string format_rois(const std::vector<Roi>& rois);

}  // namespace sabf
