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

#include "magcat/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "magcat/error.hpp"

namespace magcat {

namespace {

class CatObjective {
 public:
  explicit CatObjective(const DensityMatrix& rho) : rho_(rho), cutoff_(static_cast<int>(rho.space().dim())) {}

  double operator()(Complex alpha) const {
    const CVector v = cat_state(alpha, cutoff_).amplitudes();
    return v.dot(rho_.matrix() * v).real();
  }

 private:
  const DensityMatrix& rho_;
  int cutoff_;
};

struct Vertex {
  Complex point;
  double value;  // objective to maximize
};

// Nelder-Mead on the complex plane, maximizing inside the disc |a| <= radius.
Vertex nelder_mead(const CatObjective& f, Complex start, double step, double radius) {
  auto eval = [&](Complex a) {
    return Vertex{a, std::abs(a) > radius ? -std::numeric_limits<double>::infinity() : f(a)};
  };
  std::array<Vertex, 3> s = {eval(start), eval(start + step), eval(start + Complex(0.0, step))};
  auto order = [&s] { std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value > b.value; }); };

  for (int iter = 0; iter < 400; ++iter) {
    order();
    const double size = std::max(std::abs(s[1].point - s[0].point), std::abs(s[2].point - s[0].point));
    if (size < 1e-10) break;
    const Complex centroid = 0.5 * (s[0].point + s[1].point);
    const Vertex reflected = eval(centroid + (centroid - s[2].point));
    if (reflected.value > s[0].value) {
      const Vertex expanded = eval(centroid + 2.0 * (centroid - s[2].point));
      s[2] = expanded.value > reflected.value ? expanded : reflected;
    } else if (reflected.value > s[1].value) {
      s[2] = reflected;
    } else {
      const Vertex contracted = eval(centroid + 0.5 * (s[2].point - centroid));
      if (contracted.value > s[2].value) {
        s[2] = contracted;
      } else {
        s[1] = eval(s[0].point + 0.5 * (s[1].point - s[0].point));
        s[2] = eval(s[0].point + 0.5 * (s[2].point - s[0].point));
      }
    }
  }
  order();
  return s[0];
}

}  // namespace

Complex canonical_cat_amplitude(Complex alpha) {
  constexpr double eps = 1e-12;
  if (alpha.imag() < -eps || (std::abs(alpha.imag()) <= eps && alpha.real() < 0.0)) return -alpha;
  return alpha;
}

CatFit optimal_cat_amplitude(const DensityMatrix& rho, double search_radius) {
  if (rho.space().modes() != 1) throw ArgumentError("optimal_cat_amplitude: single-mode state required");
  if (!(search_radius > 0.0)) throw ArgumentError("optimal_cat_amplitude: search radius must be positive");
  constexpr int kAngles = 64;
  constexpr int kRadii = 40;

  const CatObjective f(rho);
  Vertex best{Complex(0.0, 0.0), f(Complex(0.0, 0.0))};
  for (int i = 1; i <= kRadii; ++i) {
    const double r = search_radius * i / kRadii;
    for (int j = 0; j < kAngles; ++j) {
      const Complex a = std::polar(r, 2.0 * std::numbers::pi * j / kAngles);
      const double v = f(a);
      if (v > best.value + 1e-12) best = {a, v};
    }
  }

  const Vertex polished = nelder_mead(f, best.point, search_radius / kRadii, search_radius);
  if (polished.value > best.value + 1e-12) best = polished;
  return {canonical_cat_amplitude(best.point), std::clamp(best.value, 0.0, 1.0)};
}

MetricSeries fidelity_series(const Trajectory& traj, const StateVector& target) {
  MetricSeries s{"fidelity", traj.times, {}, {}};
  s.values.reserve(traj.states.size());
  for (const DensityMatrix& rho : traj.states) s.values.push_back(fidelity(rho, target));
  return s;
}

MetricSeries cat_fit_series(const Trajectory& traj, double search_radius) {
  MetricSeries s{"cat_fit", traj.times, {}, {}};
  for (const DensityMatrix& rho : traj.states) {
    const CatFit fit = optimal_cat_amplitude(rho, search_radius);
    s.values.push_back(fit.fidelity);
    s.complex_values.push_back(fit.alpha);
  }
  return s;
}

MetricSeries qualifier_series(const Trajectory& traj, const ModularGrid& grid, const BellSetting& setting,
                              const QuadGrid& quad, double* max_mass_leak) {
  MetricSeries s{"chsh_qualifier", traj.times, {}, {}};
  if (traj.states.empty()) return s;
  const ModeSpace& space = traj.states.front().space();
  if (space.modes() != 2) throw ArgumentError("qualifier_series: two-mode trajectory required");
  const SpinProjector projector = SpinProjector::modular(space.cutoff(0), grid, quad);
  double leak = 0.0;
  for (const DensityMatrix& rho : traj.states) {
    const EffectiveSpinState spin = projector.project_joint(rho);
    leak = std::max(leak, 1.0 - spin.raw_trace);
    s.values.push_back(chsh_qualifier(spin, setting));
  }
  if (max_mass_leak) *max_mass_leak = leak;
  return s;
}

SeriesPeak series_max(const MetricSeries& series) {
  if (series.values.empty()) throw ArgumentError("series_max: empty series");
  if (series.times.size() != series.values.size()) throw ArgumentError("series_max: time/value length mismatch");
  SeriesPeak peak{series.times[0], series.values[0], 0};
  for (std::size_t i = 1; i < series.values.size(); ++i)
    if (series.values[i] > peak.value) peak = {series.times[i], series.values[i], i};
  return peak;
}

void write_series_csv(const MetricSeries& series, const std::string& path) {
  const bool with_complex = !series.complex_values.empty();
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::fputs(with_complex ? "time,value,re,im\n" : "time,value\n", f);
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (with_complex)
      std::fprintf(f, "%.10g,%.12e,%.12e,%.12e\n", series.times[i], series.values[i], series.complex_values[i].real(),
                   series.complex_values[i].imag());
    else
      std::fprintf(f, "%.10g,%.12e\n", series.times[i], series.values[i]);
  }
  if (std::fclose(f) != 0) throw IoError("failed writing " + path);
}

}  // namespace magcat
