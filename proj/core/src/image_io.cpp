// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "sabf/config_io.hpp"
#include "sabf/error.hpp"

namespace sabf {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'B', 'P', '1'};

template <typename T>
void append(std::string& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.append(bytes.data(), bytes.size());
}

template <typename T>
T take(const std::string& in, std::size_t& pos, const std::string& name) {
  if (in.size() - pos < sizeof(T)) throw ValidationError(name + ": truncated power image");
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), in.data() + pos, sizeof(T));
  pos += sizeof(T);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::string pgm_header(const ImageGrid& grid) {
  return "P5\n" + std::to_string(grid.nx) + " " + std::to_string(grid.nz) + "\n255\n";
}

}  // namespace

std::uint8_t gray_level(double p, double peak, double dr_db) {
  const double d = p > 0.0 ? std::clamp(10.0 * std::log10(p / peak), -dr_db, 0.0) : -dr_db;
  const double level = std::floor(255.0 * (d + dr_db) / dr_db + 0.5);
  return static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
}

std::string encode_pgm(const PowerImage& image, double dr_db) {
  if (!(dr_db > 0.0)) throw ValidationError("dynamic range must be positive");
  if (image.values.size() != image.grid.pixel_count()) {
    throw ValidationError("power image size does not match its grid");
  }
  const double peak = image.max();
  if (!(peak > 0.0)) throw NumericalError("zero image");
  std::string out = pgm_header(image.grid);
  for (double p : image.values) out.push_back(static_cast<char>(gray_level(p, peak, dr_db)));
  return out;
}

void export_image(const PowerImage& image, double dr_db, const std::filesystem::path& path) {
  write_file_atomic(path, encode_pgm(image, dr_db));
}

std::string encode_mask_pgm(const SuppressorMask& mask) {
  if (mask.weights.size() != mask.grid.pixel_count()) {
    throw ValidationError("mask size does not match its grid");
  }
  std::string out = pgm_header(mask.grid);
  for (double w : mask.weights) {
    out.push_back(static_cast<char>(
        static_cast<std::uint8_t>(std::floor(255.0 * std::clamp(w, 0.0, 1.0) + 0.5))));
  }
  return out;
}

void export_mask(const SuppressorMask& mask, const std::filesystem::path& path) {
  write_file_atomic(path, encode_mask_pgm(mask));
}

void write_power_image(const PowerImage& image, const std::filesystem::path& path) {
  const auto& g = image.grid;
  if (image.values.size() != g.pixel_count()) {
    throw ValidationError("power image size does not match its grid");
  }
  if (g.nx > std::numeric_limits<std::uint32_t>::max() ||
      g.nz > std::numeric_limits<std::uint32_t>::max() ||
      image.ensemble_length > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("power image dimensions do not fit in u32");
  }
  std::string out(kMagic.begin(), kMagic.end());
  append(out, static_cast<std::uint32_t>(g.nx));
  append(out, static_cast<std::uint32_t>(g.nz));
  for (double v : {g.x_min, g.x_max, g.z_min, g.z_max}) append(out, v);
  append(out, static_cast<std::uint32_t>(image.ensemble_length));
  for (double v : image.values) append(out, v);
  write_file_atomic(path, out);
}

PowerImage read_power_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw ValidationError(name + ": not a power image");
  }
  std::size_t pos = 4;
  PowerImage image;
  image.grid.nx = take<std::uint32_t>(bytes, pos, name);
  image.grid.nz = take<std::uint32_t>(bytes, pos, name);
  image.grid.x_min = take<double>(bytes, pos, name);
  image.grid.x_max = take<double>(bytes, pos, name);
  image.grid.z_min = take<double>(bytes, pos, name);
  image.grid.z_max = take<double>(bytes, pos, name);
  image.ensemble_length = take<std::uint32_t>(bytes, pos, name);
  image.grid.validate();
  const std::size_t count = image.grid.pixel_count();
  if (bytes.size() - pos != count * sizeof(double)) {
    throw ValidationError(name + ": payload does not match " + std::to_string(image.grid.nx) +
                          " x " + std::to_string(image.grid.nz) + " pixels");
  }
  image.values.resize(count);
  for (auto& v : image.values) v = take<double>(bytes, pos, name);
  return image;
}

}  // namespace sabf
