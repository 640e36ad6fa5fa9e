// Copyright 2026 The sabf Authors
// SPDX-License-Identifier: Apache-2.0

#include "sabf/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>

#include "sabf/error.hpp"

namespace sabf {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

constexpr std::array<std::pair<PipelineKind, std::string_view>, 5> kNames{{
    {PipelineKind::pd_cc, "pd_cc"},
    {PipelineKind::pd_fmas, "pd_fmas"},
    {PipelineKind::asap, "asap"},
    {PipelineKind::asap_fmas, "asap_fmas"},
    {PipelineKind::samas, "samas"},
}};

template <typename T>
void copy_frame(const FrameSeries<T>& one, FrameSeries<T>& into, std::size_t f) {
  std::copy(one.values.begin(), one.values.end(), into.frame(f).begin());
}

}  // namespace

std::string_view pipeline_name(PipelineKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PipelineKind parse_pipeline(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown pipeline '" + std::string(name) + "'");
}

std::vector<PipelineKind> all_pipelines() {
  std::vector<PipelineKind> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

bool uses_subapertures(PipelineKind kind) {
  return kind == PipelineKind::asap || kind == PipelineKind::asap_fmas ||
         kind == PipelineKind::samas;
}

StageTimes& StageTimes::operator+=(const StageTimes& o) {
  load += o.load;
  das += o.das;
  sum += o.sum;
  fmas += o.fmas;
  correlation += o.correlation;
  averaging += o.averaging;
  suppressor += o.suppressor;
  beamform += o.beamform;
  return *this;
}

const BeamformedSeries::Split& BeamformedSeries::split(AperturePattern pattern) const {
  for (const auto& s : splits) {
    if (s.pattern == pattern) return s;
  }
  throw ValidationError("aperture pattern " + pattern.name() + " was not beamformed");
}

SeriesRequest SeriesRequest::for_pipelines(const std::vector<PipelineKind>& kinds,
                                           const std::vector<AperturePattern>& patterns) {
  SeriesRequest r;
  for (auto k : kinds) {
    switch (k) {
      case PipelineKind::pd_cc:
        r.cc_full = true;
        break;
      case PipelineKind::pd_fmas:
        r.fmas_full = true;
        break;
      case PipelineKind::asap:
        r.sub_cc = true;
        break;
      case PipelineKind::asap_fmas:
        r.sub_fmas = true;
        break;
      case PipelineKind::samas:
        r.sub_cc = r.sub_fmas = true;
        break;
    }
  }
  if (r.sub_cc || r.sub_fmas) r.patterns = patterns;
  return r;
}

BeamformedSeries form_series(const ChannelDataSet& data, const ImageGrid& grid,
                             const ApodizationSpec& apod, FmasVariant variant,
                             const SeriesRequest& request, EnsembleRange frames) {
  frames.check(data.frames);
  const Stopwatch total;
  const DasEngine engine(data.config, grid, apod);
  const std::size_t n = frames.length;
  const bool full = request.cc_full || request.fmas_full;
  const bool sub = (request.sub_cc || request.sub_fmas) && !request.patterns.empty();

  std::vector<ApertureMask> masks;
  if (full) masks.push_back(ApertureMask::all(data.elements()));
  const std::size_t first_split = masks.size();
  BeamformedSeries out;
  out.first_frame = frames.begin;
  if (sub) {
    for (const auto& pattern : request.patterns) {
      auto [m1, m2] = split_aperture(data.elements(), pattern);
      masks.push_back(std::move(m1));
      masks.push_back(std::move(m2));
      BeamformedSeries::Split s;
      s.pattern = pattern;
      if (request.sub_cc) {
        s.cc1 = s.cc2 = ComplexFrames::zeros(grid, n);
      }
      if (request.sub_fmas) {
        s.fmas1 = s.fmas2 = RealFrames::zeros(grid, n);
      }
      out.splits.push_back(std::move(s));
    }
  }
  if (request.cc_full) out.cc_full = ComplexFrames::zeros(grid, n);
  if (request.fmas_full) out.fmas_full = RealFrames::zeros(grid, n);
  out.times.load = 0.0;
  if (masks.empty()) return out;

  std::vector<AnalyticImageStack> local;
  for (std::size_t m = 0; m < masks.size(); ++m) {
    local.push_back(AnalyticImageStack::zeros(grid, data.config.angles, 1));
  }
  std::vector<std::span<cdouble>> outs(masks.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t f = frames.begin + i;
    {
      const Stopwatch das;
      for (std::size_t a = 0; a < data.angles(); ++a) {
        const auto traces = engine.analytic_traces(data, f, a);
        for (std::size_t m = 0; m < masks.size(); ++m) outs[m] = local[m].image(0, a);
        engine.beamform(traces, data.sample_count, data.t0, a, masks, outs,
                        Normalization::active_weight_sum);
      }
      out.times.das += das.ms();
    }
    const auto combine = [&](const AnalyticImageStack& stack, ComplexFrames* cc, RealFrames* fm) {
      if (cc) {
        const Stopwatch t;
        copy_frame(coherent_compound(stack), *cc, i);
        out.times.sum += t.ms();
      }
      if (fm) {
        const Stopwatch t;
        copy_frame(fmas_compound(stack, variant), *fm, i);
        out.times.fmas += t.ms();
      }
    };
    if (full) {
      combine(local[0], request.cc_full ? &out.cc_full : nullptr,
              request.fmas_full ? &out.fmas_full : nullptr);
    }
    for (std::size_t s = 0; s < out.splits.size(); ++s) {
      auto& split = out.splits[s];
      const std::size_t m = first_split + 2 * s;
      combine(local[m], request.sub_cc ? &split.cc1 : nullptr,
              request.sub_fmas ? &split.fmas1 : nullptr);
      combine(local[m + 1], request.sub_cc ? &split.cc2 : nullptr,
              request.sub_fmas ? &split.fmas2 : nullptr);
    }
  }
  out.beamform_passes = 1;
  out.times.beamform = total.ms();
  return out;
}

PipelineImage evaluate_pipeline(const BeamformedSeries& series, PipelineKind kind,
                                const PipelineOptions& options, EnsembleRange ensemble) {
  const Stopwatch total;
  PipelineImage out;
  auto& t = out.times;
  switch (kind) {
    case PipelineKind::pd_cc: {
      const Stopwatch a;
      out.image = power_doppler(series.cc_full, ensemble);
      t.averaging += a.ms();
      break;
    }
    case PipelineKind::pd_fmas: {
      const Stopwatch a;
      out.image = power_doppler(series.fmas_full, ensemble);
      t.averaging += a.ms();
      break;
    }
    case PipelineKind::asap: {
      const auto& split = series.split(options.pattern);
      Stopwatch c;
      const auto r = asap_correlate(split.cc1, split.cc2, ensemble);
      t.correlation += c.ms();
      const Stopwatch a;
      out.image = asap_power(r, options.estimator);
      t.averaging += a.ms();
      const Stopwatch s;
      out.mask = sidelobe_suppressor(r, options.suppressor);
      t.suppressor += s.ms();
      break;
    }
    case PipelineKind::asap_fmas: {
      const auto& split = series.split(options.pattern);
      const Stopwatch c;
      const auto r = asap_correlate(split.fmas1, split.fmas2, ensemble);
      t.correlation += c.ms();
      const Stopwatch a;
      out.image = asap_power(r, options.estimator);
      t.averaging += a.ms();
      break;
    }
    case PipelineKind::samas: {
      const auto& split = series.split(options.pattern);
      const Stopwatch c;
      const auto r_asap = asap_correlate(split.cc1, split.cc2, ensemble);
      const auto r_af = asap_correlate(split.fmas1, split.fmas2, ensemble);
      t.correlation += c.ms();
      const Stopwatch s;
      out.mask = sidelobe_suppressor(r_asap, options.suppressor);
      out.image = samas_combine(*out.mask, r_af);
      t.suppressor += s.ms();
      break;
    }
  }
  t.beamform = total.ms();
  return out;
}

std::vector<PipelineResult> run_pipelines(const ChannelDataSet& data,
                                          const std::vector<PipelineKind>& kinds,
                                          const PipelineOptions& options) {
  data.check();
  const EnsembleRange frames = options.ensemble.value_or(EnsembleRange::all(data.frames));
  frames.check(data.frames);

  const Stopwatch load;
  const ClutterOutcome filtered = filter_channel_data(data, options.clutter);
  bool any_split = false;
  for (auto k : kinds) any_split = any_split || uses_subapertures(k);
  if (any_split) (void)split_aperture(data.elements(), options.pattern);
  const double load_ms = load.ms();

  const auto series = form_series(filtered.data, options.grid, options.apod, options.variant,
                                  SeriesRequest::for_pipelines(kinds, {options.pattern}), frames);
  std::vector<PipelineResult> results;
  for (auto kind : kinds) {
    auto evaluated = evaluate_pipeline(series, kind, options, EnsembleRange::all(frames.length));
    PipelineResult r;
    r.kind = kind;
    r.image = std::move(evaluated.image);
    r.mask = std::move(evaluated.mask);
    r.times = series.times;
    r.times += evaluated.times;
    r.times.load = load_ms;
    r.frames = frames.length;
    r.beamform_passes = series.beamform_passes;
    results.push_back(std::move(r));
  }
  return results;
}

PipelineResult run_pipeline(const ChannelDataSet& data, PipelineKind kind,
                            const PipelineOptions& options) {
  return std::move(run_pipelines(data, {kind}, options).front());
}

std::vector<TimingRow> time_pipelines(const ChannelDataSet& data,
                                      const std::vector<PipelineKind>& kinds,
                                      const PipelineOptions& options, std::size_t runs) {
  if (runs < 2) throw ValidationError("timing needs >= 2 runs");
  static constexpr std::array<std::string_view, 8> stages{
      "load",        "beamform",           "das",        "sum_or_fmas",
      "correlation", "ensemble_averaging", "suppressor", "total"};
  std::vector<TimingRow> rows;
  for (auto kind : kinds) {
    std::map<std::string_view, std::vector<double>> samples;
    for (std::size_t run = 0; run < runs; ++run) {
      const auto result = run_pipeline(data, kind, options);
      const double per = 1.0 / static_cast<double>(std::max<std::size_t>(result.frames, 1));
      const auto& t = result.times;
      samples["load"].push_back(t.load * per);
      samples["beamform"].push_back(t.beamform * per);
      samples["das"].push_back(t.das * per);
      samples["sum_or_fmas"].push_back((t.sum + t.fmas) * per);
      samples["correlation"].push_back(t.correlation * per);
      samples["ensemble_averaging"].push_back(t.averaging * per);
      samples["suppressor"].push_back(t.suppressor * per);
      samples["total"].push_back((t.load + t.beamform) * per);
    }
    for (auto stage : stages) {
      const auto& v = samples[stage];
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      const double sd = std::sqrt(var / static_cast<double>(v.size() - 1));
      rows.push_back({std::string(pipeline_name(kind)), std::string(stage), mean, sd});
    }
  }
  return rows;
}

}  // namespace sabf
