// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sabf {

/// Analytic signal of a real trace via the one-sided spectrum: the real part
/// is the trace, the imaginary part its Hilbert transform. A length-1 trace
/// is returned with zero imaginary part.
std::vector<std::complex<double>> analytic_signal(std::span<const double> trace);

/// Reusable FFT plans for traces of one fixed length. Not thread-safe; use
/// one per worker.
class AnalyticTransformer {
 public:
  explicit AnalyticTransformer(std::size_t length);
  ~AnalyticTransformer();
  AnalyticTransformer(const AnalyticTransformer&) = delete;
  AnalyticTransformer& operator=(const AnalyticTransformer&) = delete;

  [[nodiscard]] std::size_t length() const { return length_; }

  /// `out` must hold length() values.
  void transform(std::span<const double> in, std::span<std::complex<double>> out);
  void transform(std::span<const float> in, std::span<std::complex<double>> out);

 private:
  struct Plans;
  std::size_t length_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace sabf
