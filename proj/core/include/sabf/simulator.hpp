// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sabf/acquisition.hpp"

namespace sabf {

struct Vec2 {
  double x = 0.0;
  double z = 0.0;
  bool operator==(const Vec2&) const = default;
};

/// Point target. Echo amplitude scales as tx_amplitude^nonlinearity, so
/// nonlinearity == 1 is linear tissue and > 1 mimics microbubbles.
struct Scatterer {
  Vec2 position;  // m
  double amplitude = 1.0;
  Vec2 velocity;  // m/s
  double nonlinearity = 1.0;
  bool operator==(const Scatterer&) const = default;
};

struct PhantomScene {
  std::vector<Scatterer> scatterers;
  double noise_sigma = 0.0;  // RF noise sd per channel sample at t = 0
  std::uint64_t rng_seed = 0;
  /// Receive gain applied to the electronic noise only, in dB per microsecond
  /// of arrival time: sd(t) = noise_sigma * 10^(gain * t_us / 20). Models
  /// time-gain compensated noise over attenuation-compensated echoes. 0
  /// gives stationary white noise.
  double noise_gain_db_per_us = 0.0;

  void validate() const;
  bool operator==(const PhantomScene&) const = default;
};

enum class Envelope { gaussian, hann };

/// Transmitted pulse: carrier cos(2 pi f t) under an envelope whose FWHM
/// (Gaussian) or full length (Hann) is `cycles / center_frequency`.
struct PulseSpec {
  double center_frequency = 5.0e6;
  double cycles = 3.0;
  Envelope envelope = Envelope::gaussian;

  void validate() const;
  /// Nominal pulse length cycles / f.
  [[nodiscard]] double length() const { return cycles / center_frequency; }
  /// The pulse is treated as zero for |t| > half_support().
  [[nodiscard]] double half_support() const;
  [[nodiscard]] double evaluate(double t) const;
};

struct SampleWindow {
  double t0 = 0.0;
  std::size_t sample_count = 0;
};

/// Per-element traces for one transmit, stored (element, sample).
struct TraceSet {
  std::size_t elements = 0;
  std::size_t samples = 0;
  std::vector<double> values;

  static TraceSet zeros(std::size_t elements, std::size_t samples) {
    return {elements, samples, std::vector<double>(elements * samples, 0.0)};
  }
  [[nodiscard]] std::span<const double> trace(std::size_t e) const {
    return {values.data() + e * samples, samples};
  }
  [[nodiscard]] std::span<double> trace(std::size_t e) {
    return {values.data() + e * samples, samples};
  }
  bool operator==(const TraceSet&) const = default;
};

struct TransmitEvent {
  double angle = 0.0;  // rad
  double tx_amplitude = 1.0;
  std::uint64_t noise_stream = 0;  // selects an independent noise draw
};

/// Two-way delay of a plane wave steered at `angle` reflecting off `point` and
/// received by an element at lateral position `element_x`.
double round_trip_delay(Vec2 point, double angle, double element_x, double sound_speed);

/// Transmit apodization seen by a scatterer: the Tukey weight of the aperture
/// position that launches the ray reaching it (0 outside the insonified zone).
double transmit_weight(const AcquisitionConfig& config, Vec2 point, double angle);

/// Noise-free echoes plus white Gaussian noise for one plane-wave transmit.
/// Throws ValidationError naming the scatterer if an insonified echo falls
/// outside the sampled window.
TraceSet synthesize_transmit(const PhantomScene& scene, const AcquisitionConfig& config,
                             const PulseSpec& pulse, const SampleWindow& window,
                             const TransmitEvent& transmit);

/// Half, full, half amplitude transmits at one angle with independent noise
/// streams (noise_stream, +1, +2).
std::array<TraceSet, 3> synthesize_am_triplet(const PhantomScene& scene,
                                              const AcquisitionConfig& config,
                                              const PulseSpec& pulse, const SampleWindow& window,
                                              double angle, std::uint64_t noise_stream);

/// Moves every scatterer by velocity * dt and steps the RNG seed once.
PhantomScene advance_scene(const PhantomScene& scene, double dt);

enum class ContrastMode { linear, amplitude_modulation };

struct SequenceOptions {
  ContrastMode mode = ContrastMode::linear;
  /// Advance the scene by 1/prf between the transmits of a frame (AM pulses included).
  bool intra_frame_motion = true;
  /// Sampled window; fitted to the scene when absent.
  std::optional<SampleWindow> window;
  /// Extra window coverage (s) on both sides when fitting.
  double window_margin = 1.0e-6;
  /// When set, the fitted window also covers every pixel at depths
  /// [first, second] m inside the insonified zone.
  std::optional<std::pair<double, double>> depth_range;
};

/// Smallest window holding every insonified echo over the whole sequence,
/// widened by the margin and the optional depth range.
SampleWindow fit_sample_window(const PhantomScene& scene, const AcquisitionConfig& config,
                               const PulseSpec& pulse, std::size_t n_frames,
                               const SequenceOptions& options);

/// Frames x angles of channel data. In amplitude-modulation mode each stored
/// trace is full - half - half.
ChannelDataSet synthesize_sequence(const PhantomScene& scene, const AcquisitionConfig& config,
                                   const PulseSpec& pulse, std::size_t n_frames,
                                   const SequenceOptions& options = {});

/// Noise stream key for (frame, angle, pulse).
constexpr std::uint64_t transmit_stream(std::size_t frame, std::size_t angle, std::size_t pulse) {
  return (static_cast<std::uint64_t>(frame) << 24) | (static_cast<std::uint64_t>(angle) << 4) |
         static_cast<std::uint64_t>(pulse);
}

}  // namespace sabf
