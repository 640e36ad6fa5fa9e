// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sabf/acquisition.hpp"
#include "sabf/images.hpp"

namespace sabf {

/// Singular components with index < low_cut or >= high_cut are removed.
struct SvdThresholds {
  std::size_t low_cut = 1;
  std::optional<std::size_t> high_cut;

  /// Throws ValidationError unless low_cut < high_cut <= time_samples.
  void validate(std::size_t time_samples) const;
  bool operator==(const SvdThresholds&) const = default;
};

/// Temporal right-singular basis of a Casorati matrix (space x time),
/// singular values descending with matching columns of `vectors`.
struct TemporalSvd {
  std::vector<double> singular_values;
  Eigen::MatrixXcd vectors;
};

/// Computed from the time x time Gram matrix C^H C with a self-adjoint
/// eigensolver, so the cost is linear in the spatial size.
TemporalSvd temporal_svd(const Eigen::MatrixXd& casorati);
TemporalSvd temporal_svd(const Eigen::MatrixXcd& casorati);

/// Time x time projector onto the kept components; filtered = C * P.
Eigen::MatrixXcd svd_projector(const TemporalSvd& svd, const SvdThresholds& thresholds);

/// Thin-SVD truncation of a Casorati matrix; output has the input's shape.
Eigen::MatrixXd svd_filter(const Eigen::MatrixXd& casorati, const SvdThresholds& thresholds);
Eigen::MatrixXcd svd_filter(const Eigen::MatrixXcd& casorati, const SvdThresholds& thresholds);

/// Index of the largest discrete second difference of log(singular_values),
/// lowest index on ties. Result is in [1, n - 2]. Throws ValidationError for
/// fewer than 3 values or non-positive / increasing input.
std::size_t svd_knee_heuristic(std::span<const double> singular_values);

struct RollingWindow {
  std::size_t length = 1;
  void validate(std::size_t time_samples) const;
};

/// y'(t) = y(t) - mean(y(t - W + 1 .. t)) using the available history for
/// t < W - 1. Formed from differences y(t) - y(k), so constant rows map to
/// exactly zero.
Eigen::MatrixXd rolling_subtraction(const Eigen::MatrixXd& casorati, RollingWindow window);
Eigen::MatrixXcd rolling_subtraction(const Eigen::MatrixXcd& casorati, RollingWindow window);

/// Steady-state magnitude response |1 - (1/W) sum_k exp(-i w k)| at `hz`.
double rolling_response(std::size_t window, double hz, double frame_rate);
/// First frequency where the response reaches -3 dB (half power). Infinite
/// for W == 1, whose output is identically zero.
double rolling_cutoff_hz(std::size_t window, double frame_rate);
/// W in [2, max_window] whose cutoff is nearest `target_hz` (smaller W on ties).
std::size_t rolling_window_for_cutoff(double target_hz, double frame_rate, std::size_t max_window);

/// Axial velocity c * f_cut / (2 f0). Throws ValidationError on non-positive
/// input.
double cutoff_velocity(double f_cut, double f0, double sound_speed);

struct TgcResult {
  std::vector<double> gain;  // per depth row
  std::vector<PowerImage> frames;
};

/// Per depth row, the noise floor is the median power over `noise_band`
/// columns on each lateral edge and all frames, smoothed by a local linear
/// fit in log power over the 6 rows on either side; gain = global median /
/// floor, clamped to [0.1, 10]. Throws ValidationError if the band does not
/// fit the grid or holds no positive power.
TgcResult tgc_equalize(std::span<const PowerImage> frames, std::size_t noise_band);

enum class ClutterFilterKind { none, svd, rolling };

struct ClutterSpec {
  ClutterFilterKind kind = ClutterFilterKind::none;
  /// SVD thresholds; the knee heuristic picks low_cut when absent.
  std::optional<SvdThresholds> svd;
  /// Rolling window; chosen from `rolling_cutoff_target_hz` when 0.
  std::size_t rolling_window = 0;
  double rolling_cutoff_target_hz = 5.0;
};

struct ClutterOutcome {
  ChannelDataSet data;
  ClutterFilterKind kind = ClutterFilterKind::none;
  SvdThresholds thresholds;             // svd only
  std::vector<double> singular_values;  // svd only
  std::size_t rolling_window = 0;       // rolling only
};

/// Filters channel data along frames. The SVD uses one Casorati matrix whose
/// space axis spans every (angle, element, sample); the rolling filter acts
/// on each sample independently.
ClutterOutcome filter_channel_data(const ChannelDataSet& data, const ClutterSpec& spec);

/// Temporal singular basis of channel data, space = (angle, element, sample).
TemporalSvd channel_temporal_svd(const ChannelDataSet& data);

/// out(:, t) = sum_s in(:, s) * h(s, t) for every spatial sample.
ChannelDataSet apply_temporal(const ChannelDataSet& data, const Eigen::MatrixXcd& h);
ComplexFrames apply_temporal(const ComplexFrames& frames, const Eigen::MatrixXcd& h);

/// Per-image variants: space = pixels of each frame.
ComplexFrames svd_filter(const ComplexFrames& frames, const SvdThresholds& thresholds);
ComplexFrames rolling_subtraction(const ComplexFrames& frames, RollingWindow window);
ChannelDataSet rolling_subtraction(const ChannelDataSet& data, RollingWindow window);

}  // namespace sabf
