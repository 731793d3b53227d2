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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magcat/bell.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/modular.hpp"
#include "magcat/quadrature.hpp"

namespace magcat {

enum class SweepAxis { cross_talk, local_loss_rate };

std::string_view to_string(SweepAxis axis);

/// One-dimensional scan of the two-mode model. Each point starts from the
/// two-mode vacuum and records the largest CHSH qualifier over the run.
struct SweepSpec {
  TwoModeParams base;
  SweepAxis axis = SweepAxis::cross_talk;
  std::vector<double> values;
  double t_final = 20.0;
  double dt = 5e-4;
  Complex target_alpha{0.0, 1.4};  // fixes l_p = 2 sqrt2 |alpha| unless overridden
  std::optional<double> modular_length;
  int cutoff = 15;
  std::size_t max_frames = 200;
  unsigned threads = 1;
  BellVariant variant = BellVariant::PsiPlus;
  QuadGrid quad = default_momentum_grid();
  double grid_offset = 0.0;
  int index_min = -8;
  int index_max = 7;
};

struct SweepPoint {
  double q_max = 0.0;
  double t_at_max = 0.0;
  double mass_leak = 0.0;
  double trace_drift = 0.0;
  std::string error;  // non-empty when the point failed

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  std::vector<double> axis_values;
  std::vector<double> q_max;     // NaN for failed points
  std::vector<double> t_at_max;  // NaN for failed points
  std::vector<std::string> errors;
  /// Linear interpolation of the first Q_max = 2 crossing on the scanned grid.
  std::optional<double> threshold_estimate;
  double max_mass_leak = 0.0;
  double max_trace_drift = 0.0;
};

/// Validates the spec (non-empty, strictly increasing values; sane numerics).
void validate(const SweepSpec& spec);

TwoModeParams params_at(const SweepSpec& spec, double axis_value);

SweepPoint evaluate_point(const SweepSpec& spec, double axis_value);

/// Points run on `spec.threads` workers; results are stored in axis order.
SweepResult run_sweep(const SweepSpec& spec);

/// Bisection on Q_max - 2 inside the first sign-changing bracket of a scan.
/// Throws ArgumentError when the scan has no sign change.
double locate_threshold(const SweepSpec& spec, double tolerance);
/// `probes`, if given, receives every bisection point in evaluation order.
double locate_threshold(const SweepSpec& spec, const SweepResult& scan, double tolerance,
                        std::vector<std::pair<double, SweepPoint>>* probes = nullptr);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

void write_sweep_csv(const SweepResult& result, const std::string& path);
std::string sweep_summary_json(const SweepSpec& spec, const SweepResult& result, std::optional<double> threshold,
                               std::optional<LinearFit> fit,
                               const std::vector<std::pair<double, SweepPoint>>& probes = {});

}  // namespace magcat
