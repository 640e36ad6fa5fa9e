// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_options.hpp"

#include <set>
#include <sstream>

#include "sabf/error.hpp"

namespace sabf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::size_t parse_count(const std::string& text, const std::string& key) {
  const auto v = parse_integer(text, key);
  if (v < 0) throw ValidationError(key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

void check_known_keys(const KeyValues& values) {
  static const std::set<std::string, std::less<>> known{"num_elements",
                                                        "pitch",
                                                        "center_frequency",
                                                        "transmit_frequency",
                                                        "sampling_frequency",
                                                        "sound_speed",
                                                        "angles",
                                                        "prf",
                                                        "frame_rate",
                                                        "tukey_alpha",
                                                        "pattern",
                                                        "variant",
                                                        "suppressor",
                                                        "estimator",
                                                        "clutter",
                                                        "svd_low_cut",
                                                        "svd_high_cut",
                                                        "rolling_window",
                                                        "rolling_cutoff_hz",
                                                        "apod_window",
                                                        "apod_alpha",
                                                        "f_number",
                                                        "grid"};
  for (const auto& [key, value] : values) {
    if (!known.contains(key)) throw ValidationError("unknown configuration key '" + key + "'");
  }
}

void apply_overrides(KeyValues& values, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("override '" + item + "' lacks '='");
    values[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ImageGrid parse_grid(const std::string& text) {
  const auto v = parse_double_list(text, "grid");
  if (v.size() != 6) throw ValidationError("grid needs x_min, x_max, z_min, z_max, nx, nz");
  for (int i : {4, 5}) {
    if (!(v[i] >= 1.0) || v[i] != static_cast<double>(static_cast<std::size_t>(v[i]))) {
      throw ValidationError("grid nx and nz must be positive integers");
    }
  }
  ImageGrid g{
      v[0], v[1], v[2], v[3], static_cast<std::size_t>(v[4]), static_cast<std::size_t>(v[5])};
  g.validate();
  return g;
}

std::string format_grid(const ImageGrid& g) {
  return format_double(g.x_min) + "," + format_double(g.x_max) + "," + format_double(g.z_min) +
         "," + format_double(g.z_max) + "," + std::to_string(g.nx) + "," + std::to_string(g.nz);
}

void apply_pipeline_keys(const KeyValues& values, PipelineOptions& options) {
  for (const auto& [key, value] : values) {
    if (key == "pattern") {
      options.pattern = AperturePattern::parse(value);
    } else if (key == "variant") {
      if (value == "signed_sqrt") {
        options.variant = FmasVariant::signed_sqrt;
      } else if (value == "as_printed") {
        options.variant = FmasVariant::as_printed;
      } else {
        throw ValidationError("variant is signed_sqrt or as_printed");
      }
    } else if (key == "suppressor") {
      if (value == "binary") {
        options.suppressor = SuppressorMode::binary;
      } else if (value == "smooth") {
        options.suppressor = SuppressorMode::smooth;
      } else {
        throw ValidationError("suppressor is binary or smooth");
      }
    } else if (key == "estimator") {
      if (value == "positive_real") {
        options.estimator = AsapEstimator::positive_real;
      } else if (value == "magnitude") {
        options.estimator = AsapEstimator::magnitude;
      } else {
        throw ValidationError("estimator is positive_real or magnitude");
      }
    } else if (key == "clutter") {
      if (value == "none") {
        options.clutter.kind = ClutterFilterKind::none;
      } else if (value == "svd") {
        options.clutter.kind = ClutterFilterKind::svd;
      } else if (value == "rolling") {
        options.clutter.kind = ClutterFilterKind::rolling;
      } else {
        throw ValidationError("clutter is none, svd or rolling");
      }
    } else if (key == "svd_low_cut") {
      auto t = options.clutter.svd.value_or(SvdThresholds{});
      t.low_cut = parse_count(value, key);
      options.clutter.svd = t;
    } else if (key == "svd_high_cut") {
      auto t = options.clutter.svd.value_or(SvdThresholds{});
      t.high_cut = parse_count(value, key);
      options.clutter.svd = t;
    } else if (key == "rolling_window") {
      options.clutter.rolling_window = parse_count(value, key);
    } else if (key == "rolling_cutoff_hz") {
      options.clutter.rolling_cutoff_target_hz = parse_double(value, key);
    } else if (key == "apod_window") {
      if (value == "rectangular") {
        options.apod.window = ApodWindow::rectangular;
      } else if (value == "hann") {
        options.apod.window = ApodWindow::hann;
      } else if (value == "tukey") {
        options.apod.window = ApodWindow::tukey;
      } else {
        throw ValidationError("apod_window is rectangular, hann or tukey");
      }
    } else if (key == "apod_alpha") {
      options.apod.alpha = parse_double(value, key);
    } else if (key == "f_number") {
      options.apod.f_number = parse_double(value, key);
    } else if (key == "grid") {
      options.grid = parse_grid(value);
    }
  }
  options.apod.validate();
}

}  // namespace sabf::cli
