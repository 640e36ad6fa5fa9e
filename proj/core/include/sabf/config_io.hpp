// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sabf/acquisition.hpp"

namespace sabf {

/// Flat `key = value` text, one pair per line. '#' starts a comment.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
/// Comma- or whitespace-separated list of numbers.
std::vector<double> parse_double_list(std::string_view text, std::string_view what);
/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

/// Overrides fields of `base` with the AcquisitionConfig keys present in
/// `values` (num_elements, pitch, center_frequency, transmit_frequency,
/// sampling_frequency, sound_speed, angles, prf, frame_rate, tukey_alpha).
/// Other keys are ignored so one file can also carry pipeline options.
AcquisitionConfig config_from_key_values(const KeyValues& values, AcquisitionConfig base);
std::string config_to_key_values(const AcquisitionConfig& config);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace sabf
