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
#include <string>
#include <string_view>
#include <vector>

#include "magcat/bell.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/error.hpp"
#include "magcat/quadrature.hpp"

namespace magcat {

inline constexpr const char* kVersion = "0.3.0";

enum class Mode { single_evolve, two_evolve, wigner, catfit, project, chsh, sweep_g, sweep_gamma, stability };
std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);  // throws ConfigError

/// Physical parameters in units of the detuning. Single-mode runs read delta,
/// pump, kerr and local_loss_rate; two-mode runs use the real part of the pump.
struct PhysicalParams {
  double delta = 1.0;
  Complex pump{0.0, 0.0};
  double kerr = 0.0;
  double cross_talk = 0.0;
  double collective_rate = 0.0;
  double local_loss_rate = 0.0;
  Complex alpha_target{0.0, 1.4};

  bool operator==(const PhysicalParams&) const = default;
};

struct ModularSpec {
  std::optional<double> length;  // defaults to 2 sqrt2 |alpha_target|
  double offset = 0.0;
  int index_min = -8;
  int index_max = 7;

  bool operator==(const ModularSpec&) const = default;
};

struct NumericsConfig {
  int cutoff = 15;
  double dt = 5e-4;
  double t_final = 20.0;
  std::size_t save_every = 100;
  QuadGrid wigner_grid = default_wigner_grid();
  QuadGrid momentum_grid = default_momentum_grid();
  ModularSpec modular;

  bool operator==(const NumericsConfig&) const = default;
};

struct AnalysisConfig {
  BellVariant variant = BellVariant::PsiPlus;
  double search_radius = 3.0;
  /// wigner mode: single-mode frame times. Empty picks the best cat frame.
  std::vector<double> wigner_times;
  /// wigner mode: "single" evolves the single-mode model, "reduced" takes
  /// mode 0 of the two-mode state at t_final for each cross-talk in `panels`.
  std::string wigner_source = "single";
  std::vector<double> panels;

  bool operator==(const AnalysisConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> values;
  double tolerance = 0.0;  // bisection width; 0 skips the bisection
  std::size_t max_frames = 200;
  /// Axis range used for the straight-line fit of Q_max - 2; absent skips the fit.
  std::optional<std::vector<double>> fit_window;

  bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;

  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  Mode mode = Mode::two_evolve;
  PhysicalParams params;
  NumericsConfig numerics;
  AnalysisConfig analysis;
  SweepConfig sweep;
  std::optional<EffectiveParamsInput> effective;
  OutputConfig output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict complex literal: "a", "bi", "a+bi", "a-bi", "i", "-i". No spaces.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

/// Parses and validates a JSON document. Unknown keys are rejected by their
/// dotted path; `source` only labels error messages.
ExperimentConfig parse_config_text(std::string_view text, std::string_view source = "<config>");
ExperimentConfig parse_config(const std::string& path);
/// Canonical JSON that parses back to an equal config.
std::string write_config(const ExperimentConfig& config);

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides output.directory
  unsigned threads = 1;
};

struct RunReport {
  std::string directory;
  std::vector<std::string> files;  // relative to directory, manifest last
  std::vector<std::string> warnings;
  std::string summary_json;
};

/// Executes the experiment and writes its artifacts plus manifest.json.
RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace magcat
