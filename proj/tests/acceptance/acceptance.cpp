// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sabf/beamformer.hpp"
#include "sabf/clutter.hpp"
#include "sabf/compounding.hpp"
#include "sabf/experiment.hpp"
#include "sabf/subaperture.hpp"

namespace {

using namespace sabf;
namespace fs = std::filesystem;

constexpr double mm = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 2) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

std::string sci(double v) {
  std::ostringstream out;
  out.precision(1);
  out << std::scientific << v;
  return out.str();
}

double db(double ratio) { return 10.0 * std::log10(ratio); }

std::vector<cdouble> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<cdouble> out(n);
  for (auto& v : out) v = {normal(rng), normal(rng)};
  return out;
}

ComplexFrames random_frames(const ImageGrid& grid, std::size_t frames, std::mt19937_64& rng) {
  auto out = ComplexFrames::zeros(grid, frames);
  out.values = random_complex(out.values.size(), rng);
  return out;
}

template <typename A, typename B>
double max_relative_error(const A& a, const B& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < std::size(b); ++i) {
    num = std::max(num, static_cast<double>(std::abs(a[i] - b[i])));
    den = std::max(den, static_cast<double>(std::abs(b[i])));
  }
  return den > 0.0 ? num / den : num;
}

const ImageGrid kSmallGrid{-1.0 * mm, 1.0 * mm, 9.0 * mm, 11.0 * mm, 9, 11};

// ---------------------------------------------------------------------------

Outcome fmas_oracle() {
  Outcome out;
  std::mt19937_64 rng(2026);
  double worst_printed = 0.0;
  double worst_sqrt = 0.0;
  const std::size_t angle_counts[] = {2, 5, 10};
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::size_t angles = angle_counts[trial % 3];
    auto stack = AnalyticImageStack::zeros(kSmallGrid, evenly_spaced_angles(angles, 0.1), 2);
    stack.values = random_complex(stack.values.size(), rng);
    const auto printed = fmas_compound(stack, FmasVariant::as_printed);
    const auto rooted = fmas_compound(stack, FmasVariant::signed_sqrt);
    for (std::size_t f = 0; f < stack.frames; ++f) {
      for (std::size_t p = 0; p < stack.pixels(); ++p) {
        std::vector<double> y;
        for (std::size_t a = 0; a < angles; ++a) y.push_back(stack.image(f, a)[p].real());
        double s = 0.0;
        double sq = 0.0;
        double pairwise = 0.0;
        for (std::size_t a = 0; a < angles; ++a) {
          s += y[a];
          sq += y[a] * y[a];
          for (std::size_t b = a + 1; b < angles; ++b) {
            const double prod = y[a] * y[b];
            pairwise += (prod > 0.0 ? 1.0 : prod < 0.0 ? -1.0 : 0.0) * std::sqrt(std::abs(prod));
          }
        }
        const double closed = 0.5 * (s * s - sq);
        worst_printed = std::max(worst_printed, std::abs(printed.frame(f)[p] - closed) /
                                                    std::max(1.0, std::abs(closed)));
        worst_sqrt = std::max(worst_sqrt, std::abs(rooted.frame(f)[p] - pairwise));
      }
    }
  }
  out.check(worst_printed <= 1e-9, "as_printed error " + sci(worst_printed));
  out.check(worst_sqrt <= 1e-12, "signed_sqrt error " + sci(worst_sqrt));
  out.note("closed form " + sci(worst_printed) + ", pairwise " + sci(worst_sqrt));
  return out;
}

Outcome subaperture_algebra() {
  Outcome out;
  for (std::size_t n : {8u, 64u, 128u}) {
    for (std::size_t k : {1u, 2u, 4u}) {
      const auto [a, b] = split_aperture(n, AperturePattern{k});
      bool cover = a.size() == n && b.size() == n;
      for (std::size_t e = 0; cover && e < n; ++e) cover = (a[e] != 0) != (b[e] != 0);
      out.check(cover, "split " + std::to_string(n) + "/" + std::to_string(k) + " not a cover");
    }
  }

  std::mt19937_64 rng(7);
  auto data = ChannelDataSet::zeros(desk_config(), 1, 400, 8.0e-6);
  std::normal_distribution<float> normal;
  for (auto& v : data.samples) v = normal(rng);
  const ImageGrid grid{-4.0 * mm, 4.0 * mm, 8.0 * mm, 14.0 * mm, 17, 13};
  const ApodizationSpec apod{ApodWindow::tukey, 0.5, 1.0};
  double worst_sum = 0.0;
  for (std::size_t k : {1u, 2u, 4u}) {
    const auto [m1, m2] = split_aperture(data.elements(), AperturePattern{k});
    for (std::size_t angle = 0; angle < data.angles(); ++angle) {
      const auto y1 = das_beamform(data, grid, apod, 0, angle, &m1, Normalization::none);
      const auto y2 = das_beamform(data, grid, apod, 0, angle, &m2, Normalization::none);
      const auto full = das_beamform(data, grid, apod, 0, angle, nullptr, Normalization::none);
      std::vector<cdouble> sum(full.size());
      for (std::size_t p = 0; p < sum.size(); ++p) sum[p] = y1[p] + y2[p];
      worst_sum = std::max(worst_sum, max_relative_error(sum, full));
    }
  }
  out.check(worst_sum <= 1e-9, "sub-aperture sum error " + sci(worst_sum));

  double worst_hermitian = 0.0;
  double worst_cs = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_frames(kSmallGrid, 16, rng);
    auto y = random_frames(kSmallGrid, 16, rng);
    for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += 0.7 * x.values[i];
    const EnsembleRange range{static_cast<std::size_t>(trial % 4), 12};
    const auto xy = asap_correlate(x, y, range);
    const auto yx = asap_correlate(y, x, range);
    const auto px = power_doppler(x, range);
    const auto py = power_doppler(y, range);
    for (std::size_t p = 0; p < xy.values.size(); ++p) {
      worst_hermitian = std::max(worst_hermitian, std::abs(yx.values[p] - std::conj(xy.values[p])));
      worst_cs = std::max(worst_cs, std::norm(xy.values[p]) / (px.values[p] * py.values[p]));
    }
  }
  out.check(worst_hermitian <= 1e-12, "Hermitian error " + sci(worst_hermitian));
  out.check(worst_cs <= 1.0 + 1e-9, "Cauchy-Schwarz ratio " + fmt(worst_cs, 6));
  out.note("sum error " + sci(worst_sum) + ", max |R|^2/(PxPy) " + fmt(worst_cs, 3));
  return out;
}

// Shared full-scale runs.
struct SceneRun {
  SceneReport scene;
  std::vector<TimingRow> timing;
  double seconds = 0.0;
};

SceneRun run_scene(const std::string& name, std::vector<AperturePattern> patterns,
                   std::size_t timing_runs) {
  ReproduceConfig config;
  config.scenes = {name};
  config.frames = 200;
  config.repeats = 1;
  config.seed = 1;
  config.patterns = std::move(patterns);
  config.timing_runs = timing_runs;
  config.timing_frames = 50;
  const auto start = std::chrono::steady_clock::now();
  auto report = reproduce_tables(config);
  SceneRun run{std::move(report.scenes.front()), std::move(report.timing), 0.0};
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

const SceneRun& two_channels() {
  static const SceneRun run = run_scene("two_channels", {AperturePattern{1}}, 5);
  return run;
}

std::vector<std::string> roi_labels(const MetricsReport& report) {
  std::vector<std::string> labels;
  for (const auto& row : report.rows) {
    if (std::find(labels.begin(), labels.end(), row.roi) == labels.end()) {
      labels.push_back(row.roi);
    }
  }
  return labels;
}

Outcome table1_ordering() {
  Outcome out;
  const auto& run = two_channels();
  const auto& t = run.scene.table1;
  const char* order[] = {"samas", "asap", "pd_fmas", "pd_cc"};
  for (const auto& roi : roi_labels(t)) {
    for (bool snr : {true, false}) {
      const char* metric = snr ? "SNR" : "CNR";
      std::string chain;
      for (std::size_t i = 0; i < 4; ++i) {
        const auto& row = t.find(order[i], roi, 200);
        chain += (i ? " > " : "") + fmt(snr ? row.snr_db : row.cnr_db);
        if (i == 0) continue;
        const auto& prev = t.find(order[i - 1], roi, 200);
        const bool ok = snr ? prev.snr_db > row.snr_db : prev.cnr_db > row.cnr_db;
        out.check(ok, std::string(metric) + " " + roi + ": " + order[i - 1] + " <= " + order[i]);
      }
      out.note(std::string(metric) + " " + roi + " " + chain);
    }
    const double gain = t.find("samas", roi, 200).snr_db - t.find("pd_cc", roi, 200).snr_db;
    out.check(gain >= 10.0, "SNR gain " + roi + " " + fmt(gain) + " < 10 dB");
    out.note("gain " + roi + " " + fmt(gain) + " dB");
  }
  out.check(run.seconds < 300.0, "runtime " + fmt(run.seconds, 0) + " s");
  return out;
}

Outcome table2_ordering() {
  Outcome out;
  const auto run =
      run_scene("grating_lobe", {AperturePattern{1}, AperturePattern{2}, AperturePattern{4}}, 0);
  const auto& t = run.scene.table2;
  const AperturePattern order[] = {AperturePattern{1}, AperturePattern{4}, AperturePattern{2}};
  for (const auto& roi : roi_labels(t)) {
    std::string chain;
    for (std::size_t i = 0; i < 3; ++i) {
      const double cnr = t.find(pipeline_label(PipelineKind::samas, order[i]), roi, 200).cnr_db;
      chain += (i ? " > " : "") + order[i].name() + " " + fmt(cnr);
      if (i == 0) continue;
      const double prev =
          t.find(pipeline_label(PipelineKind::samas, order[i - 1]), roi, 200).cnr_db;
      out.check(prev > cnr, "CNR " + roi + ": " + order[i - 1].name() + " <= " + order[i].name());
    }
    out.note("CNR " + roi + " " + chain);
  }
  out.check(run.seconds < 300.0, "runtime " + fmt(run.seconds, 0) + " s");
  return out;
}

Outcome ensemble_scaling() {
  Outcome out;
  const auto& run = two_channels();
  const auto& t = run.scene.table1;
  for (const auto& roi : roi_labels(t)) {
    std::string curve;
    double prev = -INFINITY;
    for (std::size_t e : {25u, 50u, 100u, 200u}) {
      const double snr = t.find("samas", roi, e).snr_db;
      curve += (e == 25 ? "" : ", ") + fmt(snr);
      out.check(snr >= prev - 1.0, "SNR " + roi + " drops at ensemble " + std::to_string(e));
      prev = std::max(prev, snr);
    }
    const double gain = t.find("samas", roi, 200).snr_db - t.find("samas", roi, 25).snr_db;
    out.check(gain >= 5.0, "SNR " + roi + " gain 25->200 " + fmt(gain) + " < 5 dB");
    out.note(roi + " [" + curve + "] gain " + fmt(gain));
  }
  out.check(run.seconds < 300.0, "runtime " + fmt(run.seconds, 0) + " s");
  return out;
}

double peak_near(const PowerImage& image, double x, double z, double half_x, double half_z) {
  double best = 0.0;
  for (std::size_t iz = 0; iz < image.grid.nz; ++iz) {
    for (std::size_t ix = 0; ix < image.grid.nx; ++ix) {
      if (std::abs(image.grid.x(ix) - x) <= half_x && std::abs(image.grid.z(iz) - z) <= half_z) {
        best = std::max(best, image.values[iz * image.grid.nx + ix]);
      }
    }
  }
  return best;
}

Outcome grating_lobe_suppression() {
  Outcome out;
  const Vec2 point{-2.0 * mm, 20.0 * mm};
  const AperturePattern pattern{2};
  const std::size_t frames = 8;
  AcquisitionConfig config = desk_config();
  config.angles = {0.0};
  PhantomScene scene;
  scene.scatterers.push_back({point, 1.0, {}, 1.0});
  scene.noise_sigma = 0.002;
  scene.rng_seed = 4;
  const ImageGrid grid{-10.0 * mm, 10.0 * mm, 16.0 * mm, 24.0 * mm, 101, 41};
  SequenceOptions options;
  options.depth_range = std::pair{grid.z_min, std::hypot(grid.z_max, 2.0 * grid.x_max)};
  const auto data = synthesize_sequence(scene, config, {}, frames, options);
  const auto [m1, m2] = split_aperture(config.num_elements, pattern);
  const auto stacks = beamform_stacks(data, grid, {}, std::vector<ApertureMask>{m1, m2});
  const auto r = asap_correlate(coherent_compound(stacks[0]), coherent_compound(stacks[1]),
                                EnsembleRange::all(frames));
  const auto before = asap_power(r, AsapEstimator::magnitude);
  const auto mask = sidelobe_suppressor(r);
  PowerImage after = before;
  for (std::size_t p = 0; p < after.values.size(); ++p) after.values[p] *= mask.weights[p];

  // Interleaving runs of k elements gives an effective pitch of 2 k pitch.
  const double range = std::hypot(point.x, point.z);
  const double sin_g =
      point.x / range + config.wavelength() / (2.0 * pattern.run_length * config.pitch);
  const Vec2 lobe{range * sin_g, range * std::sqrt(1.0 - sin_g * sin_g)};
  const double lobe_before = peak_near(before, lobe.x, lobe.z, 1.0 * mm, 1.5 * mm);
  const double lobe_after = peak_near(after, lobe.x, lobe.z, 1.0 * mm, 1.5 * mm);
  const double main_before = peak_near(before, point.x, point.z, 0.3 * mm, 0.3 * mm);
  const double main_after = peak_near(after, point.x, point.z, 0.3 * mm, 0.3 * mm);
  const double noise = peak_near(before, 8.0 * mm, 23.0 * mm, 1.0 * mm, 0.8 * mm);

  const double visible = db(lobe_before / noise);
  const double drop = db(lobe_before / std::max(lobe_after, 1e-300));
  const double main_change = db(main_after / main_before);
  out.check(visible >= 10.0, "lobe only " + fmt(visible) + " dB over noise");
  out.check(drop >= 10.0, "lobe reduced " + fmt(drop) + " dB");
  out.check(std::abs(main_change) <= 1.0, "mainlobe changed " + fmt(main_change) + " dB");
  out.note("lobe at x " + fmt(lobe.x / mm) + " mm reduced " +
           (std::isinf(drop) || drop > 300.0 ? std::string(">300") : fmt(drop)) + " dB, mainlobe " +
           fmt(main_change) + " dB");
  return out;
}

// Steady-state gain of the rolling subtraction at `hz`, measured by filtering a
// sinusoid and projecting onto it.
double rolling_gain(std::size_t window, double hz, double fps) {
  const Eigen::Index n = 20 * static_cast<Eigen::Index>(window) + 400;
  Eigen::MatrixXd c(1, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    c(0, t) = std::cos(2.0 * std::numbers::pi * hz * static_cast<double>(t) / fps);
  }
  const auto y = rolling_subtraction(c, RollingWindow{window});
  cdouble acc{};
  cdouble ref{};
  const Eigen::Index begin = n - 400;
  for (Eigen::Index t = begin; t < n; ++t) {
    const auto phasor =
        std::polar(1.0, -2.0 * std::numbers::pi * hz * static_cast<double>(t) / fps);
    acc += y(0, t) * phasor;
    ref += c(0, t) * phasor;
  }
  return std::abs(acc) / std::abs(ref);
}

Outcome clutter_filtering() {
  Outcome out;
  const auto config = desk_config();
  const std::size_t frames = 40;
  const auto setup = make_scene("tissue_plus_flow", config, frames, 3);
  const ImageGrid grid{-3.0 * mm, 3.0 * mm, 17.0 * mm, 25.0 * mm, 31, 81};
  SequenceOptions options;
  options.depth_range = std::pair{grid.z_min, grid.z_max};
  const auto data = synthesize_sequence(setup.scene, config, {}, frames, options);
  PhantomScene flow_only = setup.scene;
  std::erase_if(flow_only.scatterers, [](const Scatterer& s) { return s.velocity == Vec2{}; });
  options.window = SampleWindow{data.t0, data.sample_count};
  const auto flow_data = synthesize_sequence(flow_only, config, {}, frames, options);

  const auto pd = [&](const ChannelDataSet& d) {
    return power_doppler(coherent_compound(beamform_stack(d, grid, {})),
                         EnsembleRange::all(frames));
  };
  const auto filtered = filter_channel_data(data, {ClutterFilterKind::svd});
  const auto before = pd(data);
  const auto after = pd(filtered.data);
  const auto flow = pd(flow_data);
  const Roi tissue{"T", RoiShape::rectangle, 0.0, 23.0 * mm, 2.5 * mm, 1.0 * mm};
  const double static_drop = db(roi_stats(before, tissue).mean / roi_stats(after, tissue).mean);
  const Roi channel{"F", RoiShape::rectangle, 0.0, 20.0 * mm, 2.5 * mm, 0.5 * mm};
  double peak_flow = 0.0;
  double peak_after = 0.0;
  for (auto p : channel.pixels(grid)) {
    peak_flow = std::max(peak_flow, flow.values[p]);
    peak_after = std::max(peak_after, after.values[p]);
  }
  const double flow_loss = db(peak_flow / peak_after);
  out.check(static_drop >= 40.0, "static clutter down " + fmt(static_drop) + " dB");
  out.check(flow_loss <= 6.0, "flow peak loss " + fmt(flow_loss) + " dB");
  out.note("svd rank " + std::to_string(filtered.thresholds.low_cut) + ": static -" +
           fmt(static_drop, 1) + " dB, flow loss " + fmt(flow_loss) + " dB");

  const double fps = 100.0;
  const auto window = rolling_window_for_cutoff(5.0, fps, 200);
  double cutoff = NAN;
  for (double hz = 0.01; hz < fps / 2.0; hz += 0.01) {
    if (rolling_gain(window, hz, fps) >= std::sqrt(0.5)) {
      cutoff = hz;
      break;
    }
  }
  out.check(std::abs(cutoff - 5.0) <= 0.5, "rolling -3 dB at " + fmt(cutoff) + " Hz");
  const double v = cutoff_velocity(5.0, 5.0e6, 1540.0);
  out.check(std::abs(v - 0.77e-3) <= 1e-9, "cutoff velocity " + fmt(v / mm, 4) + " mm/s");
  out.note("W " + std::to_string(window) + " -3 dB " + fmt(cutoff) + " Hz, v " + fmt(v / mm, 3) +
           " mm/s");
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

Outcome timing_harness() {
  Outcome out;
  const auto& rows = two_channels().timing;
  const auto csv = timing_csv(rows);
  const auto lines = split(csv, '\n');
  out.check(!lines.empty() && lines[0] == "pipeline,stage,mean_ms,sd_ms", "bad CSV header");
  const std::size_t expected = all_pipelines().size() * 8;
  out.check(lines.size() == expected + 1, "CSV has " + std::to_string(lines.size() - 1) +
                                              " rows, want " + std::to_string(expected));
  std::map<std::string, std::pair<double, double>> stage;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 4) {
      out.check(false, "malformed row '" + lines[i] + "'");
      continue;
    }
    const double mean = std::stod(f[2]);
    const double sd = std::stod(f[3]);
    out.check(std::isfinite(mean) && mean >= 0.0 && std::isfinite(sd) && sd >= 0.0,
              "bad timing in '" + lines[i] + "'");
    stage[f[0] + "/" + f[1]] = {mean, sd};
  }
  const auto cc = stage["pd_cc/sum_or_fmas"];
  const auto fm = stage["pd_fmas/sum_or_fmas"];
  // Measurable: means separated by more than the summed run-to-run deviations.
  out.check(fm.first - cc.first > fm.second + cc.second,
            "FMAS " + fmt(fm.first, 3) + " +- " + fmt(fm.second, 3) + " ms vs sum " +
                fmt(cc.first, 3) + " +- " + fmt(cc.second, 3) + " ms");
  out.note("per frame: FMAS " + fmt(fm.first, 3) + " +- " + fmt(fm.second, 3) + " ms, CC sum " +
           fmt(cc.first, 3) + " +- " + fmt(cc.second, 3) + " ms over 5 runs");
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome determinism() {
  Outcome out;
  const auto root = fs::temp_directory_path() / "sabf_acceptance_determinism";
  fs::remove_all(root);
  ReproduceConfig config;
  config.frames = 24;
  config.repeats = 2;
  config.ensembles = {12, 24};
  config.timing_runs = 2;
  config.timing_frames = 4;
  std::vector<ReproduceReport> reports;
  for (const char* run : {"a", "b"}) {
    config.output_dir = root / run;
    reports.push_back(reproduce_tables(config));
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    if (name == "timing.csv") continue;
    const auto other = root / "b" / name;
    out.check(fs::exists(other), name.string() + " missing from second run");
    if (fs::exists(other)) {
      out.check(slurp(entry.path()) == slurp(other), name.string() + " differs");
      ++compared;
    }
  }
  for (std::size_t s = 0; s < reports[0].scenes.size(); ++s) {
    out.check(metrics_csv(reports[0].scenes[s].table1) == metrics_csv(reports[1].scenes[s].table1),
              "table1 differs");
    out.check(metrics_csv(reports[0].scenes[s].table2) == metrics_csv(reports[1].scenes[s].table2),
              "table2 differs");
  }
  out.check(compared > 0, "no files written");
  out.note(std::to_string(compared) + " files identical");
  fs::remove_all(root);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_s;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "FMAS algebraic oracle", fmas_oracle, 10.0},
      {2, "sub-aperture algebra", subaperture_algebra, 30.0},
      {3, "two-channel pipeline ordering", table1_ordering, 0.0},
      {4, "aperture pattern ordering", table2_ordering, 0.0},
      {5, "ensemble scaling", ensemble_scaling, 0.0},
      {6, "grating-lobe suppression", grating_lobe_suppression, 0.0},
      {7, "clutter filtering", clutter_filtering, 0.0},
      {8, "timing harness", timing_harness, 0.0},
      {9, "determinism", determinism, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0) {
      outcome.check(seconds < c.limit_s, "runtime " + fmt(seconds, 1) + " s");
    }
    if (!outcome.pass) ++failures;
    std::printf("criterion %d %s: %s (%.1f s) %s\n", c.id, c.name, outcome.pass ? "PASS" : "FAIL",
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
