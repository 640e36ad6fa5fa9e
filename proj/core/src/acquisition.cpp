// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sabf/error.hpp"

namespace sabf {

namespace {

void require(bool ok, const char* invariant) {
  if (!ok) throw ValidationError(invariant);
}

}  // namespace

AcquisitionConfig validate_config(AcquisitionConfig config) {
  require(config.num_elements >= 2, "num_elements >= 2");
  require(std::isfinite(config.pitch) && config.pitch > 0.0, "pitch > 0");
  require(std::isfinite(config.center_frequency) && config.center_frequency > 0.0,
          "center_frequency > 0");
  require(std::isfinite(config.transmit_frequency) && config.transmit_frequency > 0.0,
          "transmit_frequency > 0");
  require(std::isfinite(config.sampling_frequency) &&
              config.sampling_frequency > 2.0 * config.center_frequency,
          "sampling_frequency > 2 x center_frequency");
  require(std::isfinite(config.sound_speed) && config.sound_speed > 0.0, "sound_speed > 0");
  require(!config.angles.empty(), "angles non-empty");
  for (std::size_t i = 0; i < config.angles.size(); ++i) {
    const double a = config.angles[i];
    require(std::isfinite(a) && std::abs(a) < std::numbers::pi / 4.0,
            "angles within (-pi/4, pi/4)");
    if (i > 0) require(a > config.angles[i - 1], "angles not increasing");
  }
  require(std::isfinite(config.frame_rate) && config.frame_rate > 0.0, "frame_rate > 0");
  require(std::isfinite(config.prf) &&
              config.prf >= config.frame_rate * static_cast<double>(config.angles.size()),
          "prf >= frame_rate x |angles|");
  require(config.tukey_alpha >= 0.0 && config.tukey_alpha <= 1.0, "tukey_alpha in [0, 1]");
  return config;
}

std::vector<double> evenly_spaced_angles(std::size_t count, double span) {
  std::vector<double> angles(count, 0.0);
  if (count < 2) return angles;
  for (std::size_t i = 0; i < count; ++i) {
    angles[i] = -0.5 * span + span * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return angles;
}

AcquisitionConfig desk_config() {
  AcquisitionConfig config;
  config.angles = evenly_spaced_angles(5, 10.0 * std::numbers::pi / 180.0);
  return config;
}

ChannelDataSet ChannelDataSet::zeros(AcquisitionConfig config, std::size_t frames,
                                     std::size_t sample_count, double t0) {
  ChannelDataSet data;
  data.frames = frames;
  data.sample_count = sample_count;
  data.t0 = t0;
  data.samples.assign(frames * config.angles.size() * config.num_elements * sample_count, 0.0f);
  data.config = std::move(config);
  return data;
}

void ChannelDataSet::check() const {
  const std::size_t expected = frames * angles() * elements() * sample_count;
  if (samples.size() != expected) {
    std::ostringstream msg;
    msg << "channel data shape mismatch: expected " << expected << " samples, found "
        << samples.size();
    throw ValidationError(msg.str());
  }
  if (!std::isfinite(t0)) throw ValidationError("t0 must be finite");
  for (float v : samples) {
    if (!std::isfinite(v)) throw ValidationError("channel data contains non-finite samples");
  }
}

void ImageGrid::validate() const {
  if (nx < 1 || nz < 1) throw ValidationError("image grid needs nx, nz >= 1");
  if (!(x_max > x_min)) throw ValidationError("image grid needs x_max > x_min");
  if (!(z_max > z_min)) throw ValidationError("image grid needs z_max > z_min");
  if (z_min < 0.0) throw ValidationError("image grid needs z_min >= 0");
}

bool Roi::contains(double x, double z) const {
  const double u = (x - cx) / half_x;
  const double v = (z - cz) / half_z;
  if (shape == RoiShape::rectangle) return std::abs(u) <= 1.0 && std::abs(v) <= 1.0;
  return u * u + v * v <= 1.0;
}

std::vector<std::size_t> Roi::pixels(const ImageGrid& grid) const {
  if (!(half_x > 0.0) || !(half_z > 0.0)) {
    throw ValidationError("ROI '" + label + "' needs positive half extents");
  }
  if (!grid.contains(cx - half_x, cz - half_z) || !grid.contains(cx + half_x, cz + half_z)) {
    throw ValidationError("ROI '" + label + "' is not inside the image grid");
  }
  std::vector<std::size_t> out;
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      if (contains(grid.x(ix), grid.z(iz))) out.push_back(iz * grid.nx + ix);
    }
  }
  return out;
}

}  // namespace sabf
