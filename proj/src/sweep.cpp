// Copyright 2026 The magcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "magcat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "magcat/analysis.hpp"
#include "magcat/error.hpp"

namespace magcat {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::cross_talk:
      return "cross_talk";
    case SweepAxis::local_loss_rate:
      return "local_loss_rate";
  }
  return "unknown";
}

void validate(const SweepSpec& spec) {
  if (spec.values.empty()) throw ArgumentError("sweep: no axis values");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1])) throw ArgumentError("sweep: axis values must be strictly increasing");
  for (double v : spec.values)
    if (!std::isfinite(v)) throw ArgumentError("sweep: non-finite axis value");
  if (spec.axis == SweepAxis::local_loss_rate && spec.values.front() < 0.0)
    throw ArgumentError("sweep: loss rates must be non-negative");
  if (!(spec.dt > 0.0) || !(spec.t_final > 0.0)) throw ArgumentError("sweep: dt and t_final must be positive");
  if (spec.cutoff < 2) throw ArgumentError("sweep: cutoff must be >= 2");
  if (spec.max_frames < 2) throw ArgumentError("sweep: max_frames must be >= 2");
  if (spec.index_min > spec.index_max) throw ArgumentError("sweep: empty box window");
  if (std::abs(spec.target_alpha) == 0.0) throw ArgumentError("sweep: target_alpha must be nonzero");
}

TwoModeParams params_at(const SweepSpec& spec, double axis_value) {
  TwoModeParams p = spec.base;
  switch (spec.axis) {
    case SweepAxis::cross_talk:
      p.cross_talk = axis_value;
      break;
    case SweepAxis::local_loss_rate:
      p.local_loss_rate = axis_value;
      break;
  }
  return p;
}

SweepPoint evaluate_point(const SweepSpec& spec, double axis_value) {
  SweepPoint point;
  try {
    const LindbladModel model = two_mode_model(params_at(spec, axis_value), spec.cutoff);
    const double length = spec.modular_length ? *spec.modular_length : optimal_modular_length(spec.target_alpha);
    const ModularGrid grid{length, spec.grid_offset, spec.index_min, spec.index_max};
    const SpinProjector projector = SpinProjector::modular(spec.cutoff, grid, spec.quad);
    const BellSetting setting = bell_setting(spec.variant);

    EvolveOptions options;
    options.t_final = spec.t_final;
    options.dt = spec.dt;
    const auto steps = static_cast<std::size_t>(std::ceil(spec.t_final / spec.dt - 1e-9));
    options.save_every = std::max<std::size_t>(1, (steps + spec.max_frames - 1) / spec.max_frames);

    MetricSeries series{"chsh_qualifier", {}, {}, {}};
    double leak = 0.0;
    const EvolveStats stats = evolve_streaming(
        model, DensityMatrix::pure(StateVector::vacuum(ModeSpace::pair(spec.cutoff))), options,
        [&](double t, const DensityMatrix& rho) {
          const EffectiveSpinState spin = projector.project_joint(rho);
          leak = std::max(leak, 1.0 - spin.raw_trace);
          series.times.push_back(t);
          series.values.push_back(chsh_qualifier(spin, setting));
        });
    const SeriesPeak peak = series_max(series);
    point.q_max = peak.value;
    point.t_at_max = peak.time;
    point.mass_leak = leak;
    point.trace_drift = stats.max_trace_drift;
  } catch (const Error& e) {
    point.error = e.what();
  }
  return point;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate(spec);
  const std::size_t n = spec.values.size();
  std::vector<SweepPoint> points(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) points[i] = evaluate_point(spec, spec.values[i]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepResult r;
  r.axis_values = spec.values;
  for (const SweepPoint& p : points) {
    r.q_max.push_back(p.ok() ? p.q_max : nan);
    r.t_at_max.push_back(p.ok() ? p.t_at_max : nan);
    r.errors.push_back(p.error);
    if (p.ok()) {
      r.max_mass_leak = std::max(r.max_mass_leak, p.mass_leak);
      r.max_trace_drift = std::max(r.max_trace_drift, p.trace_drift);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double a = r.q_max[i - 1] - 2.0, b = r.q_max[i] - 2.0;
    if (std::isnan(a) || std::isnan(b)) continue;
    if ((a > 0.0) != (b > 0.0)) {
      const double x0 = r.axis_values[i - 1], x1 = r.axis_values[i];
      r.threshold_estimate = a == b ? 0.5 * (x0 + x1) : x0 + (x1 - x0) * a / (a - b);
      break;
    }
  }
  return r;
}

double locate_threshold(const SweepSpec& spec, double tolerance) { return locate_threshold(spec, run_sweep(spec), tolerance); }

double locate_threshold(const SweepSpec& spec, const SweepResult& scan, double tolerance,
                        std::vector<std::pair<double, SweepPoint>>* probes) {
  if (!(tolerance > 0.0)) throw ArgumentError("locate_threshold: tolerance must be positive");
  for (std::size_t i = 1; i < scan.q_max.size(); ++i) {
    const double fa = scan.q_max[i - 1] - 2.0, fb = scan.q_max[i] - 2.0;
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) continue;
    double lo = scan.axis_values[i - 1], hi = scan.axis_values[i];
    const bool lo_above = fa > 0.0;
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      const SweepPoint p = evaluate_point(spec, mid);
      if (!p.ok()) throw NumericsError("locate_threshold: point " + std::to_string(mid) + " failed: " + p.error);
      if (probes) probes->emplace_back(mid, p);
      if ((p.q_max - 2.0 > 0.0) == lo_above)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  throw ArgumentError("locate_threshold: Q_max - 2 does not change sign over the scanned values");
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need at least two paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::fputs("axis,q_max,t_at_max,status\n", f);
  for (std::size_t i = 0; i < result.axis_values.size(); ++i) {
    if (result.errors[i].empty())
      std::fprintf(f, "%.10g,%.12e,%.10g,ok\n", result.axis_values[i], result.q_max[i], result.t_at_max[i]);
    else
      std::fprintf(f, "%.10g,nan,nan,failed\n", result.axis_values[i]);
  }
  if (std::fclose(f) != 0) throw IoError("failed writing " + path);
}

std::string sweep_summary_json(const SweepSpec& spec, const SweepResult& result, std::optional<double> threshold,
                               std::optional<LinearFit> fit,
                               const std::vector<std::pair<double, SweepPoint>>& probes) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["axis"] = std::string(to_string(spec.axis));
  ordered_json points = ordered_json::array();
  for (std::size_t i = 0; i < result.axis_values.size(); ++i) {
    auto finite_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    points.push_back({{"axis", result.axis_values[i]},
                      {"q_max", finite_or_null(result.q_max[i])},
                      {"t_at_max", finite_or_null(result.t_at_max[i])}});
  }
  j["points"] = points;
  ordered_json bisection = ordered_json::array();
  for (const auto& [x, p] : probes) bisection.push_back({{"axis", x}, {"q_max", p.q_max}, {"t_at_max", p.t_at_max}});
  j["bisection"] = bisection;
  j["threshold"] = threshold ? ordered_json(*threshold) : ordered_json(nullptr);
  j["threshold_interpolated"] =
      result.threshold_estimate ? ordered_json(*result.threshold_estimate) : ordered_json(nullptr);
  if (fit) {
    j["fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"residual_rms", fit->residual_rms}};
  } else {
    j["fit"] = nullptr;
  }
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < result.errors.size(); ++i)
    if (!result.errors[i].empty()) failures.push_back({{"axis", result.axis_values[i]}, {"error", result.errors[i]}});
  j["failures"] = failures;
  j["max_mass_leak"] = result.max_mass_leak;
  j["max_trace_drift"] = result.max_trace_drift;
  return j.dump(2);
}

}  // namespace magcat
