// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/config_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sabf/error.hpp"

namespace sabf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_key_values(in);
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string buf(trim(text));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + ": not a finite number: '" + buf + "'");
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  const std::string buf(trim(text));
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(buf.c_str(), &end, 10);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ValidationError(std::string(what) + ": not an integer: '" + buf + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::string buf(text);
  for (char& c : buf) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(buf);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_double(token, what));
  return out;
}

std::string format_double(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

AcquisitionConfig config_from_key_values(const KeyValues& values, AcquisitionConfig base) {
  auto get = [&](std::string_view key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("num_elements")) {
    const auto n = parse_integer(*v, "num_elements");
    if (n < 0) throw ValidationError("num_elements >= 2");
    base.num_elements = static_cast<std::size_t>(n);
  }
  if (const auto* v = get("pitch")) base.pitch = parse_double(*v, "pitch");
  if (const auto* v = get("center_frequency")) {
    base.center_frequency = parse_double(*v, "center_frequency");
  }
  if (const auto* v = get("transmit_frequency")) {
    base.transmit_frequency = parse_double(*v, "transmit_frequency");
  }
  if (const auto* v = get("sampling_frequency")) {
    base.sampling_frequency = parse_double(*v, "sampling_frequency");
  }
  if (const auto* v = get("sound_speed")) base.sound_speed = parse_double(*v, "sound_speed");
  if (const auto* v = get("angles")) base.angles = parse_double_list(*v, "angles");
  if (const auto* v = get("prf")) base.prf = parse_double(*v, "prf");
  if (const auto* v = get("frame_rate")) base.frame_rate = parse_double(*v, "frame_rate");
  if (const auto* v = get("tukey_alpha")) base.tukey_alpha = parse_double(*v, "tukey_alpha");
  return base;
}

std::string config_to_key_values(const AcquisitionConfig& config) {
  std::ostringstream out;
  out << "num_elements = " << config.num_elements << '\n'
      << "pitch = " << format_double(config.pitch) << '\n'
      << "center_frequency = " << format_double(config.center_frequency) << '\n'
      << "transmit_frequency = " << format_double(config.transmit_frequency) << '\n'
      << "sampling_frequency = " << format_double(config.sampling_frequency) << '\n'
      << "sound_speed = " << format_double(config.sound_speed) << '\n'
      << "angles =";
  for (std::size_t i = 0; i < config.angles.size(); ++i) {
    out << (i == 0 ? " " : ", ") << format_double(config.angles[i]);
  }
  out << '\n'
      << "prf = " << format_double(config.prf) << '\n'
      << "frame_rate = " << format_double(config.frame_rate) << '\n'
      << "tukey_alpha = " << format_double(config.tukey_alpha) << '\n';
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace sabf
