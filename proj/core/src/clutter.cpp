// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/clutter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "sabf/error.hpp"

namespace sabf {

namespace {

constexpr Eigen::Index chunk_rows = 4096;
constexpr std::size_t tgc_smoothing_rows = 6;

template <typename Matrix>
TemporalSvd basis_from_gram(const Matrix& gram) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
  const Eigen::Index n = gram.rows();
  TemporalSvd out;
  out.singular_values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  // Eigenvalues come ascending; store descending.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.singular_values[static_cast<std::size_t>(k)] =
        std::sqrt(std::max(solver.eigenvalues()(src), 0.0));
    out.vectors.col(k) = solver.eigenvectors().col(src).template cast<std::complex<double>>();
  }
  return out;
}

template <typename Matrix>
Matrix rolling_impl(const Matrix& in, RollingWindow window) {
  const Eigen::Index n = in.cols();
  window.validate(static_cast<std::size_t>(n));
  const auto w = static_cast<Eigen::Index>(window.length);
  Matrix out(in.rows(), n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index first = std::max<Eigen::Index>(0, t - w + 1);
    const double scale = 1.0 / static_cast<double>(t - first + 1);
    out.col(t).setZero();
    for (Eigen::Index k = first; k < t; ++k) out.col(t) += in.col(t) - in.col(k);
    out.col(t) *= scale;
  }
  return out;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

using FloatMap = Eigen::Map<const Eigen::MatrixXf>;

}  // namespace

void SvdThresholds::validate(std::size_t time_samples) const {
  if (low_cut > time_samples) throw ValidationError("svd low_cut exceeds ensemble length");
  if (high_cut) {
    if (*high_cut <= low_cut) throw ValidationError("svd high_cut must exceed low_cut");
    if (*high_cut > time_samples) throw ValidationError("svd high_cut exceeds ensemble length");
  }
}

void RollingWindow::validate(std::size_t time_samples) const {
  if (length < 1) throw ValidationError("rolling window length >= 1");
  if (length > time_samples) throw ValidationError("rolling window exceeds ensemble length");
}

TemporalSvd temporal_svd(const Eigen::MatrixXd& casorati) {
  if (casorati.cols() < 2) throw ValidationError("svd filter needs >= 2 time samples");
  const Eigen::MatrixXd gram = casorati.transpose() * casorati;
  return basis_from_gram(gram);
}

TemporalSvd temporal_svd(const Eigen::MatrixXcd& casorati) {
  if (casorati.cols() < 2) throw ValidationError("svd filter needs >= 2 time samples");
  const Eigen::MatrixXcd gram = casorati.adjoint() * casorati;
  return basis_from_gram(gram);
}

Eigen::MatrixXcd svd_projector(const TemporalSvd& svd, const SvdThresholds& thresholds) {
  const auto n = static_cast<std::size_t>(svd.vectors.cols());
  thresholds.validate(n);
  const std::size_t end = thresholds.high_cut.value_or(n);
  const auto first = static_cast<Eigen::Index>(thresholds.low_cut);
  const auto count = static_cast<Eigen::Index>(end - thresholds.low_cut);
  const auto kept = svd.vectors.middleCols(first, count);
  return kept * kept.adjoint();
}

Eigen::MatrixXd svd_filter(const Eigen::MatrixXd& casorati, const SvdThresholds& thresholds) {
  thresholds.validate(static_cast<std::size_t>(casorati.cols()));
  const Eigen::MatrixXd p = svd_projector(temporal_svd(casorati), thresholds).real();
  return casorati * p;
}

Eigen::MatrixXcd svd_filter(const Eigen::MatrixXcd& casorati, const SvdThresholds& thresholds) {
  thresholds.validate(static_cast<std::size_t>(casorati.cols()));
  return casorati * svd_projector(temporal_svd(casorati), thresholds);
}

std::size_t svd_knee_heuristic(std::span<const double> s) {
  if (s.size() < 3) throw ValidationError("knee heuristic needs >= 3 singular values");
  std::vector<double> log_s(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || !std::isfinite(s[i])) {
      throw ValidationError("singular values must be positive and finite");
    }
    if (i > 0 && s[i] > s[i - 1]) throw ValidationError("singular values must be descending");
    log_s[i] = std::log(s[i]);
  }
  const double tolerance = 1e-12 * std::max(1.0, std::abs(log_s.front() - log_s.back()));
  std::size_t best = 1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double d2 = log_s[i - 1] - 2.0 * log_s[i] + log_s[i + 1];
    if (d2 > best_value + tolerance) {
      best_value = d2;
      best = i;
    }
  }
  return best;
}

Eigen::MatrixXd rolling_subtraction(const Eigen::MatrixXd& casorati, RollingWindow window) {
  return rolling_impl(casorati, window);
}

Eigen::MatrixXcd rolling_subtraction(const Eigen::MatrixXcd& casorati, RollingWindow window) {
  return rolling_impl(casorati, window);
}

double rolling_response(std::size_t window, double hz, double frame_rate) {
  if (window < 1) throw ValidationError("rolling window length >= 1");
  const double omega = 2.0 * std::numbers::pi * hz / frame_rate;
  std::complex<double> sum{};
  for (std::size_t k = 0; k < window; ++k) {
    sum += std::polar(1.0, -omega * static_cast<double>(k));
  }
  return std::abs(1.0 - sum / static_cast<double>(window));
}

double rolling_cutoff_hz(std::size_t window, double frame_rate) {
  if (!(frame_rate > 0.0)) throw ValidationError("frame_rate > 0");
  if (window <= 1) return std::numeric_limits<double>::infinity();
  const double target = std::sqrt(0.5);
  const double nyquist = 0.5 * frame_rate;
  constexpr int steps = 8192;
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= steps; ++i) {
    const double f = nyquist * i / steps;
    if (rolling_response(window, f, frame_rate) >= target) {
      hi = f;
      break;
    }
    lo = f;
  }
  if (hi < 0.0) throw NumericalError("rolling filter never reaches -3 dB below Nyquist");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rolling_response(window, mid, frame_rate) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t rolling_window_for_cutoff(double target_hz, double frame_rate, std::size_t max_window) {
  if (!(target_hz > 0.0)) throw ValidationError("target cutoff > 0");
  if (max_window < 2) throw ValidationError("rolling window search needs max_window >= 2");
  std::size_t best = 2;
  double best_error = std::numeric_limits<double>::infinity();
  for (std::size_t w = 2; w <= max_window; ++w) {
    const double error = std::abs(rolling_cutoff_hz(w, frame_rate) - target_hz);
    if (error < best_error) {
      best_error = error;
      best = w;
    }
  }
  return best;
}

double cutoff_velocity(double f_cut, double f0, double sound_speed) {
  if (!(f_cut > 0.0) || !(f0 > 0.0) || !(sound_speed > 0.0)) {
    throw ValidationError("cutoff velocity needs positive cutoff, frequency and sound speed");
  }
  return sound_speed * f_cut / (2.0 * f0);
}

TgcResult tgc_equalize(std::span<const PowerImage> frames, std::size_t noise_band) {
  if (frames.empty()) throw ValidationError("tgc needs >= 1 frame");
  const ImageGrid& grid = frames.front().grid;
  if (noise_band == 0 || 2 * noise_band > grid.nx) {
    throw ValidationError("tgc noise band does not fit the grid");
  }
  for (const auto& f : frames) {
    if (!(f.grid == grid) || f.values.size() != grid.pixel_count()) {
      throw ValidationError("tgc frames differ in grid");
    }
  }
  std::vector<double> row_floor(grid.nz);
  std::vector<double> all;
  std::vector<double> row;
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    row.clear();
    for (const auto& f : frames) {
      for (std::size_t b = 0; b < noise_band; ++b) {
        row.push_back(f.values[iz * grid.nx + b]);
        row.push_back(f.values[iz * grid.nx + grid.nx - 1 - b]);
      }
    }
    all.insert(all.end(), row.begin(), row.end());
    row_floor[iz] = median(row);
  }
  const double global = median(all);
  if (!(global > 0.0)) throw ValidationError("degenerate tgc noise band");
  // Local linear fit of log floor against row within +-tgc_smoothing_rows,
  // ignoring empty rows; unbiased for log-linear depth trends at the edges.
  TgcResult out;
  out.gain.resize(grid.nz);
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    const std::size_t lo = iz >= tgc_smoothing_rows ? iz - tgc_smoothing_rows : 0;
    const std::size_t hi = std::min(grid.nz - 1, iz + tgc_smoothing_rows);
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t r = lo; r <= hi; ++r) {
      if (!(row_floor[r] > 0.0)) continue;
      const double x = static_cast<double>(r) - static_cast<double>(iz);
      const double y = std::log(row_floor[r]);
      n += 1.0;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    if (n == 0.0) {
      out.gain[iz] = 10.0;
      continue;
    }
    const double det = n * sxx - sx * sx;
    const double log_floor = det > 0.0 ? (sy * sxx - sx * sxy) / det : sy / n;
    out.gain[iz] = std::clamp(global / std::exp(log_floor), 0.1, 10.0);
  }
  out.frames.assign(frames.begin(), frames.end());
  for (auto& f : out.frames) {
    for (std::size_t iz = 0; iz < grid.nz; ++iz) {
      for (std::size_t ix = 0; ix < grid.nx; ++ix) f.values[iz * grid.nx + ix] *= out.gain[iz];
    }
  }
  return out;
}

TemporalSvd channel_temporal_svd(const ChannelDataSet& data) {
  const auto n = static_cast<Eigen::Index>(data.frames);
  if (n < 2) throw ValidationError("svd filter needs >= 2 frames");
  const auto space = static_cast<Eigen::Index>(data.angles() * data.elements() * data.sample_count);
  const FloatMap c(data.samples.data(), space, n);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < space; r += chunk_rows) {
    const Eigen::Index rows = std::min(chunk_rows, space - r);
    const Eigen::MatrixXd block = c.middleRows(r, rows).cast<double>();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return basis_from_gram(gram);
}

ChannelDataSet apply_temporal(const ChannelDataSet& data, const Eigen::MatrixXcd& h) {
  const auto n = static_cast<Eigen::Index>(data.frames);
  if (h.rows() != n || h.cols() != n) throw ValidationError("temporal filter size mismatch");
  const Eigen::MatrixXd hr = h.real();
  const auto space = static_cast<Eigen::Index>(data.angles() * data.elements() * data.sample_count);
  ChannelDataSet out = data;
  if (n == 0 || space == 0) return out;
  const FloatMap c(data.samples.data(), space, n);
  Eigen::Map<Eigen::MatrixXf> dst(out.samples.data(), space, n);
  for (Eigen::Index r = 0; r < space; r += chunk_rows) {
    const Eigen::Index rows = std::min(chunk_rows, space - r);
    const Eigen::MatrixXd block = c.middleRows(r, rows).cast<double>();
    dst.middleRows(r, rows) = (block * hr).cast<float>();
  }
  return out;
}

namespace {

Eigen::Map<const Eigen::MatrixXcd> casorati_view(const ComplexFrames& frames) {
  return {frames.values.data(), static_cast<Eigen::Index>(frames.pixels()),
          static_cast<Eigen::Index>(frames.frames)};
}

ComplexFrames from_casorati(const ImageGrid& grid, const Eigen::MatrixXcd& m) {
  auto out = ComplexFrames::zeros(grid, static_cast<std::size_t>(m.cols()));
  Eigen::Map<Eigen::MatrixXcd>(out.values.data(), m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

ComplexFrames apply_temporal(const ComplexFrames& frames, const Eigen::MatrixXcd& h) {
  const auto n = static_cast<Eigen::Index>(frames.frames);
  if (h.rows() != n || h.cols() != n) throw ValidationError("temporal filter size mismatch");
  return from_casorati(frames.grid, casorati_view(frames) * h);
}

ComplexFrames svd_filter(const ComplexFrames& frames, const SvdThresholds& thresholds) {
  return from_casorati(frames.grid,
                       svd_filter(Eigen::MatrixXcd(casorati_view(frames)), thresholds));
}

ComplexFrames rolling_subtraction(const ComplexFrames& frames, RollingWindow window) {
  return from_casorati(frames.grid,
                       rolling_subtraction(Eigen::MatrixXcd(casorati_view(frames)), window));
}

ChannelDataSet rolling_subtraction(const ChannelDataSet& data, RollingWindow window) {
  window.validate(data.frames);
  const auto n = static_cast<Eigen::Index>(data.frames);
  const auto space = static_cast<Eigen::Index>(data.angles() * data.elements() * data.sample_count);
  ChannelDataSet out = data;
  const FloatMap c(data.samples.data(), space, n);
  Eigen::Map<Eigen::MatrixXf> dst(out.samples.data(), space, n);
  for (Eigen::Index r = 0; r < space; r += chunk_rows) {
    const Eigen::Index rows = std::min(chunk_rows, space - r);
    const Eigen::MatrixXd block = c.middleRows(r, rows).cast<double>();
    dst.middleRows(r, rows) = rolling_impl(block, window).cast<float>();
  }
  return out;
}

ClutterOutcome filter_channel_data(const ChannelDataSet& data, const ClutterSpec& spec) {
  ClutterOutcome out;
  out.kind = spec.kind;
  switch (spec.kind) {
    case ClutterFilterKind::none:
      out.data = data;
      return out;
    case ClutterFilterKind::svd: {
      const auto svd = channel_temporal_svd(data);
      out.singular_values = svd.singular_values;
      if (spec.svd) {
        out.thresholds = *spec.svd;
      } else {
        // Zero singular values (exactly rank-deficient data) stop the knee
        // search; only the positive prefix is considered.
        std::vector<double> positive;
        for (double s : svd.singular_values) {
          if (!(s > 1e-12 * svd.singular_values.front())) break;
          positive.push_back(s);
        }
        out.thresholds =
            SvdThresholds{positive.size() >= 3 ? svd_knee_heuristic(positive) : 1, std::nullopt};
      }
      out.data = apply_temporal(data, svd_projector(svd, out.thresholds));
      return out;
    }
    case ClutterFilterKind::rolling: {
      out.rolling_window =
          spec.rolling_window > 0
              ? spec.rolling_window
              : rolling_window_for_cutoff(spec.rolling_cutoff_target_hz, data.config.frame_rate,
                                          std::max<std::size_t>(data.frames, 2));
      out.data = rolling_subtraction(data, RollingWindow{out.rolling_window});
      return out;
    }
  }
  return out;
}

}  // namespace sabf
