// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/beamformer.hpp"

#include <numbers>

#include "sabf/analytic.hpp"
#include "sabf/error.hpp"
#include "sabf/simulator.hpp"
#include "test_support.hpp"

namespace sabf {
namespace {

using testing::mm;
constexpr double kPi = std::numbers::pi;

// O(N^2) DFT: keep DC (and Nyquist), double the positive bins, drop the rest.
std::vector<cdouble> naive_analytic(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<cdouble> spectrum(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      spectrum[k] += x[t] * std::polar(1.0, -2.0 * kPi * double(k * t % n) / double(n));
    }
    if (k == 0 || 2 * k == n) continue;
    spectrum[k] *= (2 * k < n) ? 2.0 : 0.0;
  }
  std::vector<cdouble> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      out[t] += spectrum[k] * std::polar(1.0, 2.0 * kPi * double(k * t % n) / double(n));
    }
    out[t] /= double(n);
  }
  return out;
}

// Straightforward per-pixel loop with the same geometry conventions.
std::vector<cdouble> naive_das(const ChannelDataSet& data, const ImageGrid& grid, std::size_t frame,
                               std::size_t angle, double f_number, bool hann,
                               const std::vector<bool>* mask, bool normalize) {
  const auto& c = data.config;
  std::vector<std::vector<cdouble>> analytic;
  for (std::size_t e = 0; e < c.num_elements; ++e) {
    const auto tr = data.trace(frame, angle, e);
    analytic.push_back(naive_analytic(std::vector<double>(tr.begin(), tr.end())));
  }
  std::vector<cdouble> image;
  for (std::size_t iz = 0; iz < grid.nz; ++iz) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const double x = grid.x(ix);
      const double z = grid.z(iz);
      cdouble acc{};
      double wsum = 0.0;
      for (std::size_t e = 0; e < c.num_elements; ++e) {
        if (mask && !(*mask)[e]) continue;
        const double xe = c.element_x(e);
        double w = 1.0;
        if (f_number > 0.0) {
          const double h = z / (2.0 * f_number);
          if (std::abs(x - xe) > h) continue;
          if (hann) w = std::pow(std::sin(kPi * (xe - x + h) / (2.0 * h)), 2);
        } else if (hann) {
          w = std::pow(std::sin(kPi * double(e) / double(c.num_elements - 1)), 2);
        }
        wsum += w;
        const double tau =
            (z * std::cos(c.angles[angle]) + x * std::sin(c.angles[angle])) / c.sound_speed +
            std::hypot(x - xe, z) / c.sound_speed;
        const double pos = (tau - data.t0) * c.sampling_frequency;
        if (pos < 0.0 || pos > double(data.sample_count - 1)) continue;
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double f = pos - double(i);
        const auto& a = analytic[e];
        acc += w * (i + 1 < a.size() ? (1.0 - f) * a[i] + f * a[i + 1] : a[i]);
      }
      image.push_back(normalize ? (wsum > 0.0 ? acc / wsum : cdouble{}) : acc);
    }
  }
  return image;
}

ChannelDataSet point_data(Vec2 p, std::size_t elements = 32, std::size_t angles = 3) {
  auto config = testing::small_config(elements, angles);
  PhantomScene scene;
  scene.scatterers.push_back({p, 1.0, {}, 1.0});
  return synthesize_sequence(scene, config, {}, 1);
}

TEST(AnalyticSignal, ToneOnABinHasUnitEnvelope) {
  const std::size_t n = 256;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::cos(2.0 * kPi * 20.0 * double(t) / double(n));
  const auto a = analytic_signal(x);
  for (std::size_t t = 0; t < n; ++t) {
    EXPECT_NEAR(std::abs(a[t]), 1.0, 1e-12);
    EXPECT_NEAR(a[t].imag(), std::sin(2.0 * kPi * 20.0 * double(t) / double(n)), 1e-12);
  }
}

TEST(AnalyticSignal, MatchesADirectDft) {
  for (std::size_t n : {2u, 7u, 64u, 99u}) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> normal;
    std::vector<double> x(n);
    for (auto& v : x) v = normal(rng);
    const auto got = analytic_signal(x);
    const auto want = naive_analytic(x);
    for (std::size_t t = 0; t < n; ++t) {
      EXPECT_EQ(got[t].real(), x[t]);
      EXPECT_NEAR(got[t].imag(), want[t].imag(), 1e-10) << "n=" << n << " t=" << t;
    }
  }
}

TEST(AnalyticSignal, NarrowbandPulseQuadratureMatchesTheHilbertPair) {
  // For a Gaussian-windowed carrier the Hilbert transform of g cos is g sin
  // up to spectral leakage far below 1e-6.
  const double fs = 40.0e6;
  const double f0 = 5.0e6;
  const double sigma = 0.3e-6;
  const std::size_t n = 512;
  std::vector<double> x(n);
  std::vector<double> quad(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double time = (double(t) - 256.0) / fs;
    const double g = std::exp(-0.5 * time * time / (sigma * sigma));
    x[t] = g * std::cos(2.0 * kPi * f0 * time);
    quad[t] = g * std::sin(2.0 * kPi * f0 * time);
  }
  const auto a = analytic_signal(x);
  for (std::size_t t = 64; t < n - 64; ++t) EXPECT_NEAR(a[t].imag(), quad[t], 1e-6);
}

TEST(AnalyticSignal, DegenerateInputs) {
  EXPECT_TRUE(analytic_signal(std::vector<double>{}).empty());
  const auto one = analytic_signal(std::vector<double>{3.5});
  EXPECT_EQ(one[0], cdouble(3.5, 0.0));
  for (auto v : analytic_signal(std::vector<double>(33, 0.0))) EXPECT_EQ(v, cdouble{});
  std::vector<float> f{1.0f, -2.0f, 0.5f, 4.0f, 0.0f};
  std::vector<cdouble> via_float(5);
  AnalyticTransformer(5).transform(std::span<const float>(f), via_float);
  EXPECT_EQ(via_float, analytic_signal(std::vector<double>(f.begin(), f.end())));
}

TEST(DasBeamform, MatchesTheNaiveLoop) {
  const auto data = point_data({0.3 * mm, 10.1 * mm}, 16, 3);
  const auto grid = testing::small_grid(7, 9);
  struct Case {
    ApodizationSpec apod;
    bool hann;
  };
  for (const auto& [apod, hann] :
       {Case{{ApodWindow::rectangular, 0.5, 0.0}, false}, Case{{ApodWindow::hann, 0.5, 0.0}, true},
        Case{{ApodWindow::hann, 0.5, 1.5}, true},
        Case{{ApodWindow::rectangular, 0.5, 2.0}, false}}) {
    for (std::size_t a = 0; a < 3; ++a) {
      const auto got = das_beamform(data, grid, apod, 0, a);
      const auto want = naive_das(data, grid, 0, a, apod.f_number, hann, nullptr, true);
      EXPECT_LT(testing::relative_error(got, want), 1e-9) << "angle " << a;
    }
  }
}

TEST(DasBeamform, PointTargetPeaksAtItsPosition) {
  const Vec2 p{0.2 * mm, 20.0 * mm};
  const auto data = point_data(p, 64, 1);
  const ImageGrid grid{-2.0 * mm, 2.0 * mm, 18.0 * mm, 22.0 * mm, 41, 41};
  const auto image = das_beamform(data, grid, {ApodWindow::hann, 0.5, 1.5}, 0, 0);
  std::vector<double> power(image.size());
  std::transform(image.begin(), image.end(), power.begin(), [](cdouble v) { return std::norm(v); });
  const auto peak = std::max_element(power.begin(), power.end()) - power.begin();
  EXPECT_LE(std::abs(grid.x(peak % grid.nx) - p.x), grid.dx());
  EXPECT_LE(std::abs(grid.z(peak / grid.nx) - p.z), grid.dz());
  auto sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  EXPECT_GE(10.0 * std::log10(power[peak] / sorted[sorted.size() / 2]), 20.0);
}

TEST(DasBeamform, ShiftingTheTargetShiftsThePeak) {
  const ImageGrid grid{-2.0 * mm, 2.0 * mm, 18.0 * mm, 22.0 * mm, 41, 41};
  auto peak_of = [&](Vec2 p) {
    const auto image = das_beamform(point_data(p, 64, 1), grid, {}, 0, 0);
    return std::max_element(image.begin(), image.end(),
                            [](cdouble a, cdouble b) { return std::abs(a) < std::abs(b); }) -
           image.begin();
  };
  const auto base = peak_of({0.0, 20.0 * mm});
  EXPECT_EQ(peak_of({3.0 * grid.dx(), 20.0 * mm}), base + 3);
  EXPECT_EQ(peak_of({0.0, 20.0 * mm + 2.0 * grid.dz()}),
            base + 2 * static_cast<std::ptrdiff_t>(grid.nx));
}

TEST(DasBeamform, ZeroDataGivesZeroImage) {
  const auto data = ChannelDataSet::zeros(testing::small_config(), 1, 300, 10.0e-6);
  for (auto v : das_beamform(data, testing::small_grid(), {}, 0, 1)) EXPECT_EQ(v, cdouble{});
}

TEST(DasBeamform, EchoesOutsideTheWindowContributeNothing) {
  auto data = testing::random_dataset(testing::small_config(), 1, 50, 3, 60.0e-6);
  for (auto v : das_beamform(data, testing::small_grid(), {}, 0, 0)) EXPECT_EQ(v, cdouble{});
}

TEST(DasBeamform, IsLinearInTheData) {
  const auto config = testing::small_config(12, 2);
  const auto d1 = testing::random_dataset(config, 1, 300, 1);
  const auto d2 = testing::random_dataset(config, 1, 300, 2);
  auto mix = d1;
  for (std::size_t i = 0; i < mix.samples.size(); ++i) {
    mix.samples[i] = 2.0f * d1.samples[i] - d2.samples[i];  // exact in float for these inputs
  }
  const auto grid = testing::small_grid();
  const auto i1 = das_beamform(d1, grid, {}, 0, 1);
  const auto i2 = das_beamform(d2, grid, {}, 0, 1);
  const auto im = das_beamform(mix, grid, {}, 0, 1);
  std::vector<cdouble> want(i1.size());
  for (std::size_t p = 0; p < want.size(); ++p) want[p] = 2.0 * i1[p] - i2[p];
  EXPECT_LT(testing::relative_error(im, want), 1e-6);
}

TEST(DasBeamform, FullMaskEqualsNoMask) {
  const auto data = testing::random_dataset(testing::small_config(), 1, 300, 4);
  const auto full = ApertureMask::all(data.elements());
  EXPECT_EQ(das_beamform(data, testing::small_grid(), {}, 0, 2, &full),
            das_beamform(data, testing::small_grid(), {}, 0, 2));
}

TEST(DasBeamform, UnnormalizedSubaperturesSumToTheFullAperture) {
  const auto data = testing::random_dataset(testing::small_config(16, 3), 1, 300, 5);
  ApertureMask even{std::vector<std::uint8_t>(16, 0), "even"};
  ApertureMask odd{std::vector<std::uint8_t>(16, 0), "odd"};
  for (std::size_t e = 0; e < 16; ++e) (e % 2 ? odd : even).active[e] = 1;
  const ApodizationSpec apod{ApodWindow::tukey, 0.5, 1.0};
  const auto grid = testing::small_grid();
  const auto a = das_beamform(data, grid, apod, 0, 0, &even, Normalization::none);
  const auto b = das_beamform(data, grid, apod, 0, 0, &odd, Normalization::none);
  const auto all = das_beamform(data, grid, apod, 0, 0, nullptr, Normalization::none);
  std::vector<cdouble> sum(a.size());
  for (std::size_t p = 0; p < sum.size(); ++p) sum[p] = a[p] + b[p];
  EXPECT_LT(testing::relative_error(sum, all), 1e-9);
  const std::vector<bool> even_mask(even.active.begin(), even.active.end());
  const ApodizationSpec hann{ApodWindow::hann, 0.5, 1.0};
  EXPECT_LT(
      testing::relative_error(das_beamform(data, grid, hann, 0, 1, &even, Normalization::none),
                              naive_das(data, grid, 0, 1, 1.0, true, &even_mask, false)),
      1e-9);
}

TEST(DasBeamform, RejectsBadMasksAndIndices) {
  const auto data = testing::random_dataset(testing::small_config(8, 1), 1, 100, 6);
  const ApertureMask none{std::vector<std::uint8_t>(8, 0), "none"};
  const ApertureMask short_mask{std::vector<std::uint8_t>(7, 1), "short"};
  const auto grid = testing::small_grid();
  EXPECT_THROW(das_beamform(data, grid, {}, 0, 0, &none), ValidationError);
  EXPECT_THROW(das_beamform(data, grid, {}, 0, 0, &short_mask), ValidationError);
  EXPECT_THROW(das_beamform(data, grid, {}, 1, 0), ValidationError);
  EXPECT_THROW(das_beamform(data, grid, {}, 0, 1), ValidationError);
  EXPECT_THROW(das_beamform(data, grid, {ApodWindow::tukey, 1.5, 0.0}, 0, 0), ValidationError);
}

TEST(BeamformStack, ShapeAndPerTransmitImages) {
  const auto data = testing::random_dataset(testing::small_config(8, 3), 2, 200, 7);
  const auto grid = testing::small_grid(5, 6);
  const auto stack = beamform_stack(data, grid, {});
  EXPECT_EQ(stack.frames, 2u);
  EXPECT_EQ(stack.angles(), 3u);
  EXPECT_EQ(stack.values.size(), 2u * 3u * 30u);
  EXPECT_NO_THROW(stack.check());
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t a = 0; a < 3; ++a) {
      const auto image = stack.image(f, a);
      const auto want = das_beamform(data, grid, {}, f, a);
      EXPECT_TRUE(std::equal(image.begin(), image.end(), want.begin()));
    }
  }
}

TEST(BeamformStacks, OnePassEqualsSeparatePasses) {
  const auto data = testing::random_dataset(testing::small_config(8, 2), 2, 200, 8);
  ApertureMask left{{1, 1, 1, 1, 0, 0, 0, 0}, "left"};
  const std::vector<ApertureMask> masks{ApertureMask::all(8), left};
  const auto grid = testing::small_grid(5, 6);
  const auto stacks = beamform_stacks(data, grid, {}, masks);
  ASSERT_EQ(stacks.size(), 2u);
  EXPECT_EQ(stacks[0].values, beamform_stack(data, grid, {}).values);
  EXPECT_EQ(stacks[1].values, beamform_stack(data, grid, {}, &left).values);
}

}  // namespace
}  // namespace sabf
