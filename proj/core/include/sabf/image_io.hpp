// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sabf/images.hpp"
#include "sabf/subaperture.hpp"

namespace sabf {

/// Gray level of power `p` on a log scale: d = 10 log10(p / peak) clamped to
/// [-dr_db, 0] maps linearly onto [0, 255], rounding half up.
std::uint8_t gray_level(double p, double peak, double dr_db);

/// Binary PGM (P5) bytes, first row = shallowest depth. Throws NumericalError
/// for an all-zero image, ValidationError for dr_db <= 0.
std::string encode_pgm(const PowerImage& image, double dr_db);
void export_image(const PowerImage& image, double dr_db, const std::filesystem::path& path);

/// Suppressor weights as gray round(255 w): 0 -> 0, 1 -> 255.
std::string encode_mask_pgm(const SuppressorMask& mask);
void export_mask(const SuppressorMask& mask, const std::filesystem::path& path);

/// Raw power image ("SBP1", little-endian): u32 nx, nz; f64 x_min, x_max,
/// z_min, z_max; u32 ensemble_length; f64 values row-major.
void write_power_image(const PowerImage& image, const std::filesystem::path& path);
PowerImage read_power_image(const std::filesystem::path& path);

}  // namespace sabf
