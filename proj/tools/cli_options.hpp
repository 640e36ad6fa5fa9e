// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sabf/config_io.hpp"
#include "sabf/pipeline.hpp"

namespace sabf::cli {

/// Throws ValidationError on a key no subcommand reads.
void check_known_keys(const KeyValues& values);

/// Merges `key=value` overrides into `values`; later entries win.
void apply_overrides(KeyValues& values, const std::vector<std::string>& overrides);

/// Pipeline keys understood in config files and overrides:
///   pattern            10 | 1100 | 11110000 | run length
///   variant            signed_sqrt | as_printed
///   suppressor         binary | smooth
///   estimator          positive_real | magnitude
///   clutter            none | svd | rolling
///   svd_low_cut, svd_high_cut, rolling_window, rolling_cutoff_hz
///   apod_window        rectangular | hann | tukey
///   apod_alpha, f_number
///   grid               x_min, x_max, z_min, z_max, nx, nz (m, m, m, m, count, count)
void apply_pipeline_keys(const KeyValues& values, PipelineOptions& options);

ImageGrid parse_grid(const std::string& text);
std::string format_grid(const ImageGrid& grid);

std::vector<std::string> split_list(const std::string& text);

}  // namespace sabf::cli
