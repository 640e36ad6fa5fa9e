// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "sabf/acquisition.hpp"

namespace sabf {

/// Channel-data container ("SBF1"), all values little-endian:
///
///   char[4]  "SBF1"
///   u32      frames, angles, elements, samples
///   f64      pitch, center_frequency, sampling_frequency, sound_speed,
///            t0, prf, frame_rate
///   u32      angle count, followed by that many f64 angles (rad)
///   f32      samples in (frame, angle, element, sample) row-major order
///
/// The fixed layout has no slot for transmit_frequency or tukey_alpha, so
/// the writer appends a 20-byte trailer ("SBX1", f64 transmit_frequency,
/// f64 tukey_alpha) after the tensor. Readers that only know the fixed layout
/// can ignore it; when it is absent transmit_frequency defaults to the center
/// frequency and tukey_alpha to 0.25.
void write_dataset(const ChannelDataSet& data, const std::filesystem::path& path);

/// Throws IoError on I/O failure and ValidationError when the header and the
/// tensor size disagree.
ChannelDataSet read_dataset(const std::filesystem::path& path);

}  // namespace sabf
