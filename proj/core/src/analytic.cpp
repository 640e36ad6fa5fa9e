// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/analytic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace sabf {

namespace {
// FFTW's planner is not re-entrant.
std::mutex planner_mutex;
}  // namespace

struct AnalyticTransformer::Plans {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  fftw_complex* signal = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n) {
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex);
    real = fftw_alloc_real(n);
    spectrum = fftw_alloc_complex(n);
    signal = fftw_alloc_complex(n);
    forward = fftw_plan_dft_r2c_1d(len, real, spectrum, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(len, spectrum, signal, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spectrum);
    fftw_free(signal);
  }
};

AnalyticTransformer::AnalyticTransformer(std::size_t length) : length_(length) {
  if (length_ >= 2) plans_ = std::make_unique<Plans>(length_);
}

AnalyticTransformer::~AnalyticTransformer() = default;

void AnalyticTransformer::transform(std::span<const double> in,
                                    std::span<std::complex<double>> out) {
  const std::size_t n = length_;
  if (n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = {in[i], 0.0};
    return;
  }
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n), plans_->real);
  fftw_execute(plans_->forward);
  // r2c fills bins 0..n/2. Keep DC and Nyquist, double positive frequencies,
  // zero the negative half.
  auto* s = plans_->spectrum;
  const std::size_t half = n / 2;
  const std::size_t positive_end = (n % 2 == 0) ? half : half + 1;
  for (std::size_t k = 1; k < positive_end; ++k) {
    s[k][0] *= 2.0;
    s[k][1] *= 2.0;
  }
  for (std::size_t k = half + 1; k < n; ++k) s[k][0] = s[k][1] = 0.0;
  fftw_execute(plans_->backward);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    // The real part is the input by construction; copy it to avoid rounding.
    out[i] = {in[i], plans_->signal[i][1] * scale};
  }
}

void AnalyticTransformer::transform(std::span<const float> in,
                                    std::span<std::complex<double>> out) {
  std::vector<double> widened(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(length_));
  transform(std::span<const double>(widened), out);
}

std::vector<std::complex<double>> analytic_signal(std::span<const double> trace) {
  std::vector<std::complex<double>> out(trace.size());
  AnalyticTransformer transformer(trace.size());
  transformer.transform(trace, out);
  return out;
}

}  // namespace sabf
