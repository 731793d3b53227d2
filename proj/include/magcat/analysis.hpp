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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "magcat/bell.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/hilbert.hpp"
#include "magcat/modular.hpp"
#include "magcat/quadrature.hpp"

namespace magcat {

/// A scalar metric sampled on trajectory frames. `complex_values` is either
/// empty or parallel to `values` (e.g. the fitted cat amplitude alongside its fidelity).
struct MetricSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<Complex> complex_values;
};

struct CatFit {
  Complex alpha{0.0, 0.0};
  double fidelity = 0.0;
};

inline constexpr double kDefaultCatSearchRadius = 3.0;

/// Even cats satisfy cat(a) = cat(-a); pick Im a > 0, or Re a >= 0 on the real axis.
Complex canonical_cat_amplitude(Complex alpha);

/// Maximizes <cat(a)|rho|cat(a)> over |a| <= search_radius: a 64 x 40 polar
/// scan followed by a Nelder-Mead polish. Ties go to the smallest |a|.
CatFit optimal_cat_amplitude(const DensityMatrix& rho, double search_radius = kDefaultCatSearchRadius);

MetricSeries fidelity_series(const Trajectory& traj, const StateVector& target);

/// Fitted cat fidelity in `values`, canonical amplitude in `complex_values`.
MetricSeries cat_fit_series(const Trajectory& traj, double search_radius = kDefaultCatSearchRadius);

/// Joint modular projection of every frame followed by the CHSH qualifier.
/// `max_mass_leak`, when given, receives the largest 1 - raw_trace seen.
MetricSeries qualifier_series(const Trajectory& traj, const ModularGrid& grid, const BellSetting& setting,
                              const QuadGrid& quad = default_momentum_grid(), double* max_mass_leak = nullptr);

struct SeriesPeak {
  double time = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

/// Maximum value; the earliest frame wins ties.
SeriesPeak series_max(const MetricSeries& series);

/// "time,value" or "time,value,re,im" rows.
void write_series_csv(const MetricSeries& series, const std::string& path);

}  // namespace magcat
