// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/scenes.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sabf/config_io.hpp"
#include "sabf/error.hpp"

namespace sabf {

namespace {

constexpr double mm = 1e-3;

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(engine);
  }
  std::mt19937_64 engine;
};

/// Laminar flow along x in a horizontal channel centered at depth z_center.
void add_horizontal_channel(std::vector<Scatterer>& out, Rng& rng, double z_center, double height,
                            double x_lo, double x_hi, double v_max, double density_per_mm2,
                            double duration) {
  const double upstream = x_lo - v_max * duration;
  const double area_mm2 = (x_hi - upstream) / mm * height / mm;
  const auto count = static_cast<std::size_t>(std::lround(area_mm2 * density_per_mm2));
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform(upstream, x_hi);
    const double d = rng.uniform(-0.5, 0.5);
    const double v = v_max * (1.0 - 4.0 * d * d);
    out.push_back({{x, z_center + d * height}, 1.0, {v, 0.0}, 2.0});
  }
}

/// Laminar flow along +z in a vertical vessel centered at lateral x_center.
void add_vertical_vessel(std::vector<Scatterer>& out, Rng& rng, double x_center, double width,
                         double z_lo, double z_hi, double v_max, double density_per_mm2,
                         double duration) {
  const double upstream = z_lo - v_max * duration;
  const double area_mm2 = (z_hi - upstream) / mm * width / mm;
  const auto count = static_cast<std::size_t>(std::lround(area_mm2 * density_per_mm2));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = rng.uniform(upstream, z_hi);
    const double d = rng.uniform(-0.5, 0.5);
    const double v = v_max * (1.0 - 4.0 * d * d);
    out.push_back({{x_center + d * width, z}, 1.0, {0.0, v}, 2.0});
  }
}

void add_tissue(std::vector<Scatterer>& out, Rng& rng, std::size_t count, double x_lo, double x_hi,
                double z_lo, double z_hi, double amplitude) {
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform(x_lo, x_hi);
    const double z = rng.uniform(z_lo, z_hi);
    const double a = amplitude * rng.uniform(0.5, 1.5);
    out.push_back({{x, z}, a, {0.0, 0.0}, 1.0});
  }
}

Roi rect(std::string label, double cx, double cz, double hx, double hz) {
  return Roi{std::move(label), RoiShape::rectangle, cx, cz, hx, hz};
}

}  // namespace

ImageGrid desk_grid() { return ImageGrid{-5.0 * mm, 5.0 * mm, 14.0 * mm, 26.0 * mm, 51, 121}; }

std::vector<std::string> scene_names() {
  return {"point_grid", "two_channels", "tissue_plus_flow", "grating_lobe"};
}

SceneSetup make_scene(std::string_view name, const AcquisitionConfig& config, std::size_t n_frames,
                      std::uint64_t seed) {
  SceneSetup setup;
  setup.name = std::string(name);
  setup.grid = desk_grid();
  setup.scene.rng_seed = seed;
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 17);
  const double duration = static_cast<double>(n_frames) / config.frame_rate;
  // Lateral extent insonified by every steering angle at mid depth.
  const double half_fov = 0.5 * config.aperture_width();
  auto& sc = setup.scene.scatterers;

  if (name == "point_grid") {
    setup.mode = ContrastMode::linear;
    setup.scene.noise_sigma = 0.01;
    for (double z : {16.0 * mm, 20.0 * mm, 24.0 * mm}) {
      for (double x : {-3.0 * mm, 0.0, 3.0 * mm}) sc.push_back({{x, z}, 1.0, {}, 1.0});
    }
    setup.rois = {rect("P", 0.0, 20.0 * mm, 0.4 * mm, 0.4 * mm),
                  rect("P_bg", 1.5 * mm, 18.0 * mm, 0.6 * mm, 0.6 * mm)};
  } else if (name == "two_channels") {
    setup.mode = ContrastMode::amplitude_modulation;
    setup.scene.noise_sigma = 0.1;
    setup.scene.noise_gain_db_per_us = 0.4;
    add_horizontal_channel(sc, rng, 17.0 * mm, 1.0 * mm, -half_fov - 2.0 * mm, half_fov + 2.0 * mm,
                           100.0 * mm, 6.0, duration);
    add_horizontal_channel(sc, rng, 23.0 * mm, 1.0 * mm, -half_fov - 2.0 * mm, half_fov + 2.0 * mm,
                           60.0 * mm, 6.0, duration);
    add_tissue(sc, rng, 150, -half_fov, half_fov, 14.5 * mm, 25.5 * mm, 2.0);
    setup.rois = {rect("A", 0.0, 17.0 * mm, 3.0 * mm, 0.3 * mm),
                  rect("A_bg", 0.0, 20.0 * mm, 3.0 * mm, 1.0 * mm),
                  rect("B", 0.0, 23.0 * mm, 3.0 * mm, 0.3 * mm),
                  rect("B_bg", 0.0, 25.2 * mm, 3.0 * mm, 0.6 * mm)};
  } else if (name == "tissue_plus_flow") {
    setup.mode = ContrastMode::linear;
    setup.scene.noise_sigma = 0.02;
    add_tissue(sc, rng, 300, -half_fov, half_fov, 14.5 * mm, 25.5 * mm, 100.0);
    Rng flow_rng(seed + 99);
    std::vector<Scatterer> flow;
    add_horizontal_channel(flow, flow_rng, 20.0 * mm, 1.0 * mm, -half_fov - 2.0 * mm,
                           half_fov + 2.0 * mm, 15.0 * mm, 4.0, duration);
    for (auto& s : flow) s.nonlinearity = 1.0;
    sc.insert(sc.end(), flow.begin(), flow.end());
    setup.rois = {rect("F", 0.0, 20.0 * mm, 3.0 * mm, 0.3 * mm),
                  rect("F_bg", 0.0, 23.0 * mm, 3.0 * mm, 1.0 * mm)};
  } else if (name == "grating_lobe") {
    setup.mode = ContrastMode::amplitude_modulation;
    setup.scene.noise_sigma = 0.1;
    setup.scene.noise_gain_db_per_us = 0.4;
    add_vertical_vessel(sc, rng, -3.0 * mm, 1.0 * mm, 14.0 * mm, 26.0 * mm, 5.0 * mm, 6.0,
                        duration);
    setup.rois = {rect("G", -3.0 * mm, 20.0 * mm, 0.3 * mm, 3.0 * mm),
                  rect("G_bg", 2.0 * mm, 20.0 * mm, 2.5 * mm, 3.0 * mm)};
  } else {
    throw ValidationError("unknown scene '" + std::string(name) + "'");
  }
  return setup;
}

PhantomScene parse_scene(std::istream& in) {
  PhantomScene scene;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "scene line " + std::to_string(line_no);
    if (const auto eq = line.find('='); eq != std::string::npos) {
      std::istringstream key_in(line.substr(0, eq));
      std::string key;
      key_in >> key;
      const auto value = line.substr(eq + 1);
      if (key == "noise_sigma") {
        scene.noise_sigma = parse_double(value, where);
      } else if (key == "rng_seed") {
        const auto seed = parse_integer(value, where);
        if (seed < 0) throw ValidationError(where + ": rng_seed must be non-negative");
        scene.rng_seed = static_cast<std::uint64_t>(seed);
      } else if (key == "noise_gain_db_per_us") {
        scene.noise_gain_db_per_us = parse_double(value, where);
      } else {
        throw ValidationError(where + ": unknown key '" + key + "'");
      }
      continue;
    }
    const auto v = parse_double_list(line, where);
    if (v.size() != 6) throw ValidationError(where + ": expected 'x z amplitude vx vz gamma'");
    scene.scatterers.push_back({{v[0], v[1]}, v[2], {v[3], v[4]}, v[5]});
  }
  scene.validate();
  return scene;
}

PhantomScene read_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_scene(in);
}

std::string format_scene(const PhantomScene& scene) {
  std::ostringstream out;
  out << "noise_sigma = " << format_double(scene.noise_sigma) << '\n'
      << "rng_seed = " << scene.rng_seed << '\n'
      << "noise_gain_db_per_us = " << format_double(scene.noise_gain_db_per_us) << '\n'
      << "# x z amplitude vx vz gamma\n";
  for (const auto& s : scene.scatterers) {
    out << format_double(s.position.x) << ' ' << format_double(s.position.z) << ' '
        << format_double(s.amplitude) << ' ' << format_double(s.velocity.x) << ' '
        << format_double(s.velocity.z) << ' ' << format_double(s.nonlinearity) << '\n';
  }
  return out.str();
}

std::vector<Roi> parse_rois(std::istream& in) {
  std::vector<Roi> rois;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string label, shape, cx, cz, dx, dz;
    if (!(fields >> label)) continue;
    const auto where = "roi line " + std::to_string(line_no);
    if (!(fields >> shape >> cx >> cz >> dx >> dz)) {
      throw ValidationError(where + ": expected 'label shape cx cz dx dz'");
    }
    Roi roi;
    roi.label = label;
    if (shape == "rect" || shape == "rectangle") {
      roi.shape = RoiShape::rectangle;
    } else if (shape == "ellipse") {
      roi.shape = RoiShape::ellipse;
    } else {
      throw ValidationError(where + ": unknown shape '" + shape + "'");
    }
    roi.cx = parse_double(cx, where);
    roi.cz = parse_double(cz, where);
    roi.half_x = parse_double(dx, where);
    roi.half_z = parse_double(dz, where);
    if (!(roi.half_x > 0.0 && roi.half_z > 0.0)) {
      throw ValidationError(where + ": half extents must be positive");
    }
    rois.push_back(roi);
  }
  return rois;
}

std::vector<Roi> read_rois(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_rois(in);
}

std::string format_rois(const std::vector<Roi>& rois) {
  std::ostringstream out;
  for (const auto& r : rois) {
    out << r.label << ' ' << (r.shape == RoiShape::rectangle ? "rect" : "ellipse") << ' '
        << format_double(r.cx) << ' ' << format_double(r.cz) << ' ' << format_double(r.half_x)
        << ' ' << format_double(r.half_z) << '\n';
  }
  return out.str();
}

}  // namespace sabf
