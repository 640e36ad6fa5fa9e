// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "sabf/error.hpp"

namespace sabf {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'B', 'F', '1'};
constexpr std::array<char, 4> kTrailerMagic{'S', 'B', 'X', '1'};
constexpr std::size_t kTrailerBytes = 4 + 2 * sizeof(double);

static_assert(std::endian::native == std::endian::little ||
              std::endian::native == std::endian::big);

template <typename T>
void put(std::ofstream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(bytes.data(), bytes.size());
}

class Reader {
 public:
  Reader(std::ifstream& in, std::string name) : in_(in), name_(std::move(name)) {}

  template <typename T>
  T get() {
    std::array<char, sizeof(T)> bytes;
    in_.read(bytes.data(), bytes.size());
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) {
      throw ValidationError(name_ + ": truncated header");
    }
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }

 private:
  std::ifstream& in_;
  std::string name_;
};

std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError(std::string(what) + " does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_dataset(const ChannelDataSet& data, const std::filesystem::path& path) {
  data.check();
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    put(out, to_u32(data.frames, "frames"));
    put(out, to_u32(data.angles(), "angles"));
    put(out, to_u32(data.elements(), "elements"));
    put(out, to_u32(data.sample_count, "samples"));
    const auto& c = data.config;
    for (double v : {c.pitch, c.center_frequency, c.sampling_frequency, c.sound_speed, data.t0,
                     c.prf, c.frame_rate}) {
      put(out, v);
    }
    put(out, to_u32(c.angles.size(), "angle count"));
    for (double a : c.angles) put(out, a);
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(data.samples.data()),
                static_cast<std::streamsize>(data.samples.size() * sizeof(float)));
    } else {
      for (float v : data.samples) put(out, v);
    }
    out.write(kTrailerMagic.data(), kTrailerMagic.size());
    put(out, c.transmit_frequency);
    put(out, c.tukey_alpha);
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

ChannelDataSet read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string());

  Reader r(in, path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) {
    throw ValidationError(path.string() + ": not an SBF1 dataset");
  }
  const auto frames = r.get<std::uint32_t>();
  const auto angles = r.get<std::uint32_t>();
  const auto elements = r.get<std::uint32_t>();
  const auto samples = r.get<std::uint32_t>();

  ChannelDataSet data;
  auto& c = data.config;
  c.num_elements = elements;
  c.pitch = r.get<double>();
  c.center_frequency = r.get<double>();
  c.sampling_frequency = r.get<double>();
  c.sound_speed = r.get<double>();
  data.t0 = r.get<double>();
  c.prf = r.get<double>();
  c.frame_rate = r.get<double>();
  const auto angle_count = r.get<std::uint32_t>();
  if (angle_count != angles) {
    throw ValidationError(path.string() + ": shape mismatch: angle count " +
                          std::to_string(angle_count) + " != angle dimension " +
                          std::to_string(angles));
  }
  c.angles.resize(angle_count);
  for (auto& a : c.angles) a = r.get<double>();
  c.transmit_frequency = c.center_frequency;
  c.tukey_alpha = 0.25;
  data.frames = frames;
  data.sample_count = samples;

  const std::uint64_t header_bytes = 4 + 4 * 4 + 7 * 8 + 4 + 8ull * angle_count;
  const std::uint64_t count = std::uint64_t{frames} * angles * elements * samples;
  const std::uint64_t tensor_bytes = count * sizeof(float);
  const std::uint64_t payload = file_size - header_bytes;
  const bool has_trailer = payload == tensor_bytes + kTrailerBytes;
  if (file_size < header_bytes || (payload != tensor_bytes && !has_trailer)) {
    throw ValidationError(path.string() + ": shape mismatch: header declares " +
                          std::to_string(count) + " samples but the file holds " +
                          std::to_string(file_size < header_bytes ? 0 : payload) +
                          " payload bytes");
  }

  data.samples.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data.samples.data()),
            static_cast<std::streamsize>(tensor_bytes));
    if (static_cast<std::uint64_t>(in.gcount()) != tensor_bytes) {
      throw IoError(path.string() + ": short read");
    }
  } else {
    for (auto& v : data.samples) v = r.get<float>();
  }
  if (has_trailer) {
    std::array<char, 4> tmagic{};
    in.read(tmagic.data(), tmagic.size());
    if (tmagic != kTrailerMagic) throw ValidationError(path.string() + ": bad trailer");
    c.transmit_frequency = r.get<double>();
    c.tukey_alpha = r.get<double>();
  }
  data.check();
  return data;
}

}  // namespace sabf
