// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "sabf/compounding.hpp"
#include "sabf/error.hpp"

namespace sabf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double tukey(double u, double alpha) {
  if (u < 0.0 || u > 1.0) return 0.0;
  if (alpha <= 0.0) return 1.0;
  const double half = 0.5 * alpha;
  if (u < half) return 0.5 * (1.0 + std::cos(std::numbers::pi * (u / half - 1.0)));
  if (u > 1.0 - half) return 0.5 * (1.0 + std::cos(std::numbers::pi * ((u - 1.0) / half + 1.0)));
  return 1.0;
}

// Pulse sampled on a fine grid; linear interpolation keeps rendering cheap
// while staying exactly linear in the echo amplitude.
class PulseTable {
 public:
  PulseTable(const PulseSpec& pulse, double sampling_frequency)
      : half_support_(pulse.half_support()) {
    constexpr double kOversample = 256.0;
    step_ = 1.0 / (sampling_frequency * kOversample);
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_support_ / step_)) + 2;
    table_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      table_[i] = pulse.evaluate(-half_support_ + step_ * static_cast<double>(i));
    }
    inv_step_ = 1.0 / step_;
  }

  [[nodiscard]] double half_support() const { return half_support_; }

  [[nodiscard]] double operator()(double t) const {
    const double u = (t + half_support_) * inv_step_;
    if (u < 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= table_.size()) return 0.0;
    const double frac = u - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  double half_support_;
  double step_ = 0.0;
  double inv_step_ = 0.0;
  std::vector<double> table_;
};

PhantomScene moved(const PhantomScene& scene, double dt) {
  PhantomScene out = scene;
  for (auto& s : out.scatterers) {
    s.position.x += s.velocity.x * dt;
    s.position.z += s.velocity.z * dt;
  }
  return out;
}

void render_echoes(const PhantomScene& scene, const AcquisitionConfig& config,
                   const PulseTable& pulse, const SampleWindow& window, double angle,
                   double tx_amplitude, TraceSet& out) {
  const double fs = config.sampling_frequency;
  const double hs = pulse.half_support();
  const auto last = static_cast<double>(window.sample_count) - 1.0;
  for (std::size_t si = 0; si < scene.scatterers.size(); ++si) {
    const auto& s = scene.scatterers[si];
    const double gain = s.amplitude * std::pow(tx_amplitude, s.nonlinearity) *
                        transmit_weight(config, s.position, angle);
    if (gain == 0.0) continue;
    for (std::size_t e = 0; e < config.num_elements; ++e) {
      const double tau =
          round_trip_delay(s.position, angle, config.element_x(e), config.sound_speed);
      const double lo = std::ceil((tau - hs - window.t0) * fs);
      const double hi = std::floor((tau + hs - window.t0) * fs);
      if (lo < 0.0 || hi > last) {
        std::ostringstream msg;
        msg << "scatterer " << si << " at (" << s.position.x << ", " << s.position.z
            << ") m echoes outside the sampled window [" << window.t0 << ", "
            << window.t0 + last / fs << "] s";
        throw ValidationError(msg.str());
      }
      auto trace = out.trace(e);
      for (auto n = static_cast<std::size_t>(lo); n <= static_cast<std::size_t>(hi); ++n) {
        const double t = window.t0 + static_cast<double>(n) / fs - tau;
        trace[n] += gain * pulse(t);
      }
    }
  }
}

void add_noise(const PhantomScene& scene, const AcquisitionConfig& config,
               const SampleWindow& window, std::uint64_t stream, TraceSet& out) {
  if (scene.noise_sigma == 0.0) return;
  std::mt19937_64 rng(splitmix64(scene.rng_seed ^ splitmix64(stream)));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double fs = config.sampling_frequency;
  std::vector<double> sd(window.sample_count, scene.noise_sigma);
  if (scene.noise_gain_db_per_us != 0.0) {
    for (std::size_t n = 0; n < sd.size(); ++n) {
      const double t_us = (window.t0 + static_cast<double>(n) / fs) * 1e6;
      sd[n] = scene.noise_sigma * std::pow(10.0, scene.noise_gain_db_per_us * t_us / 20.0);
    }
  }
  for (std::size_t e = 0; e < out.elements; ++e) {
    auto trace = out.trace(e);
    for (std::size_t n = 0; n < trace.size(); ++n) trace[n] += sd[n] * normal(rng);
  }
}

std::size_t pulses_per_angle(ContrastMode mode) { return mode == ContrastMode::linear ? 1 : 3; }

double transmit_time(const AcquisitionConfig& config, std::size_t frame, std::size_t angle,
                     std::size_t pulse, const SequenceOptions& options) {
  double t = static_cast<double>(frame) / config.frame_rate;
  if (options.intra_frame_motion) {
    const std::size_t slot = angle * pulses_per_angle(options.mode) + pulse;
    t += static_cast<double>(slot) / config.prf;
  }
  return t;
}

}  // namespace

void PhantomScene::validate() const {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ValidationError("noise_sigma >= 0");
  }
  if (!std::isfinite(noise_gain_db_per_us)) throw ValidationError("noise gain must be finite");
  for (std::size_t i = 0; i < scatterers.size(); ++i) {
    const auto& s = scatterers[i];
    const bool ok = s.position.z > 0.0 && std::isfinite(s.position.x) &&
                    std::isfinite(s.position.z) && std::isfinite(s.amplitude) &&
                    std::isfinite(s.velocity.x) && std::isfinite(s.velocity.z) &&
                    s.nonlinearity >= 1.0 && std::isfinite(s.nonlinearity);
    if (!ok) {
      throw ValidationError("scatterer " + std::to_string(i) +
                            " violates z > 0, finite amplitude, nonlinearity >= 1");
    }
  }
}

void PulseSpec::validate() const {
  if (!(cycles > 0.0) || !(center_frequency > 0.0)) {
    throw ValidationError("pulse needs cycles > 0 and center_frequency > 0");
  }
}

double PulseSpec::half_support() const {
  if (envelope == Envelope::hann) return 0.5 * length();
  const double sigma = length() / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  return 4.0 * sigma;
}

double PulseSpec::evaluate(double t) const {
  if (std::abs(t) > half_support()) return 0.0;
  const double carrier = std::cos(2.0 * std::numbers::pi * center_frequency * t);
  if (envelope == Envelope::hann) {
    return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * t / length())) * carrier;
  }
  const double sigma = length() / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  return std::exp(-0.5 * t * t / (sigma * sigma)) * carrier;
}

double round_trip_delay(Vec2 p, double angle, double element_x, double c) {
  const double dx = p.x - element_x;
  return (p.z * std::cos(angle) + p.x * std::sin(angle)) / c + std::sqrt(dx * dx + p.z * p.z) / c;
}

double transmit_weight(const AcquisitionConfig& config, Vec2 p, double angle) {
  const double launch_x = p.x - p.z * std::tan(angle);
  const double first = config.element_x(0);
  const double u = (launch_x - first) / config.aperture_width();
  return tukey(u, config.tukey_alpha);
}

TraceSet synthesize_transmit(const PhantomScene& scene, const AcquisitionConfig& config,
                             const PulseSpec& pulse, const SampleWindow& window,
                             const TransmitEvent& transmit) {
  scene.validate();
  pulse.validate();
  const PulseTable table(pulse, config.sampling_frequency);
  auto out = TraceSet::zeros(config.num_elements, window.sample_count);
  render_echoes(scene, config, table, window, transmit.angle, transmit.tx_amplitude, out);
  add_noise(scene, config, window, transmit.noise_stream, out);
  return out;
}

std::array<TraceSet, 3> synthesize_am_triplet(const PhantomScene& scene,
                                              const AcquisitionConfig& config,
                                              const PulseSpec& pulse, const SampleWindow& window,
                                              double angle, std::uint64_t noise_stream) {
  scene.validate();
  pulse.validate();
  const PulseTable table(pulse, config.sampling_frequency);
  // Both half-amplitude pulses share one noise-free rendering.
  auto half = TraceSet::zeros(config.num_elements, window.sample_count);
  render_echoes(scene, config, table, window, angle, 0.5, half);
  auto full = TraceSet::zeros(config.num_elements, window.sample_count);
  render_echoes(scene, config, table, window, angle, 1.0, full);
  std::array<TraceSet, 3> out{half, std::move(full), half};
  for (std::size_t i = 0; i < 3; ++i) add_noise(scene, config, window, noise_stream + i, out[i]);
  return out;
}

PhantomScene advance_scene(const PhantomScene& scene, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("advance_scene needs dt >= 0");
  PhantomScene out = moved(scene, dt);
  out.rng_seed = splitmix64(scene.rng_seed);
  return out;
}

SampleWindow fit_sample_window(const PhantomScene& scene, const AcquisitionConfig& config,
                               const PulseSpec& pulse, std::size_t n_frames,
                               const SequenceOptions& options) {
  const double c = config.sound_speed;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t a = 0; a < config.angles.size(); ++a) {
      const double angle = config.angles[a];
      const auto state = moved(scene, transmit_time(config, f, a, 0, options));
      for (const auto& s : state.scatterers) {
        if (s.amplitude == 0.0 || transmit_weight(config, s.position, angle) == 0.0) continue;
        for (std::size_t e = 0; e < config.num_elements; ++e) {
          const double tau = round_trip_delay(s.position, angle, config.element_x(e), c);
          lo = std::min(lo, tau);
          hi = std::max(hi, tau);
        }
      }
    }
  }
  if (options.depth_range) {
    const auto [z_lo, z_hi] = *options.depth_range;
    const double half_ap = 0.5 * config.aperture_width();
    for (double angle : config.angles) {
      for (double z : {z_lo, z_hi}) {
        for (double x : {-half_ap + z * std::tan(angle), half_ap + z * std::tan(angle)}) {
          for (double ex : {-half_ap, half_ap, x}) {
            const double tau = round_trip_delay({x, z}, angle, ex, c);
            lo = std::min(lo, tau);
            hi = std::max(hi, tau);
          }
        }
      }
    }
  }
  if (!std::isfinite(lo)) return {0.0, 2};
  const double fs = config.sampling_frequency;
  const double start = std::max(0.0, lo - pulse.half_support() - options.window_margin);
  const double t0 = std::floor(start * fs) / fs;
  const double end = hi + pulse.half_support() + options.window_margin;
  const auto count = static_cast<std::size_t>(std::ceil((end - t0) * fs)) + 1;
  return {t0, count};
}

ChannelDataSet synthesize_sequence(const PhantomScene& scene, const AcquisitionConfig& config,
                                   const PulseSpec& pulse, std::size_t n_frames,
                                   const SequenceOptions& options) {
  const auto cfg = validate_config(config);
  scene.validate();
  pulse.validate();
  const SampleWindow window =
      options.window ? *options.window : fit_sample_window(scene, cfg, pulse, n_frames, options);
  auto data = ChannelDataSet::zeros(cfg, n_frames, window.sample_count, window.t0);
  const PulseTable table(pulse, cfg.sampling_frequency);
  const std::size_t pulses = pulses_per_angle(options.mode);
  if (options.intra_frame_motion &&
      static_cast<double>(pulses * cfg.angles.size()) / cfg.prf > 1.0 / cfg.frame_rate) {
    throw ValidationError("prf too low for " + std::to_string(pulses) +
                          " pulses per angle at this frame rate");
  }

  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t a = 0; a < cfg.angles.size(); ++a) {
      const double angle = cfg.angles[a];
      const auto stream = transmit_stream(f, a, 0);
      auto pulse_echo = [&](std::size_t p, double amplitude) {
        const auto state = moved(scene, transmit_time(cfg, f, a, p, options));
        auto traces = TraceSet::zeros(cfg.num_elements, window.sample_count);
        render_echoes(state, cfg, table, window, angle, amplitude, traces);
        add_noise(state, cfg, window, stream + p, traces);
        return traces;
      };
      TraceSet traces;
      if (options.mode == ContrastMode::linear) {
        traces = pulse_echo(0, 1.0);
      } else {
        const auto half = pulse_echo(0, 0.5);
        const auto full = pulse_echo(1, 1.0);
        const auto half2 = pulse_echo(2, 0.5);
        traces = am_combine(half, full, half2);
      }
      auto block = data.transmit(f, a);
      std::transform(traces.values.begin(), traces.values.end(), block.begin(),
                     [](double v) { return static_cast<float>(v); });
    }
  }
  return data;
}

}  // namespace sabf
