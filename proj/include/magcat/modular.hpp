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

#include <array>
#include <string>

#include "magcat/hilbert.hpp"
#include "magcat/quadrature.hpp"

namespace magcat {

/// Momentum boxes [offset + l N_p, offset + l (N_p + 1)) for N_p in
/// [index_min, index_max]. Box N_p = 2m + n + 1 belongs to cell m, spin n.
struct ModularGrid {
  double modular_length = 0.0;
  double offset = 0.0;
  int index_min = -8;
  int index_max = 7;
};

struct BoxLabel {
  int cell;
  int spin;
};

BoxLabel split_box_index(int box);

/// 2x2 (one mode) or 4x4 (two modes) reduced spin state. Two-mode index is 2 n1 + n2.
struct EffectiveSpinState {
  CMatrix matrix;
  /// Trace before renormalization; 1 - raw_trace is the mass lost to the window and quadrature.
  double raw_trace = 1.0;

  int qubits() const { return matrix.rows() == 4 ? 2 : 1; }
};

std::string to_json(const EffectiveSpinState& state);
EffectiveSpinState effective_spin_from_json(const std::string& text);

/// l_p = 2 sqrt(2) |alpha|, the momentum separation of |alpha> and |-alpha>.
double optimal_modular_length(Complex alpha);

inline constexpr int kMinPointsPerBox = 20;
inline constexpr double kMinWindowMass = 0.999;

/// Linear map from Fock-basis density matrices to effective spin states.
/// Element (n, n') is sum_{jj'} rho_jj' K^{nn'}_jj' with
/// K^{nn'}_jj' = sum over paired momentum nodes of <p_n|j> <j'|p_n'>; the
/// momentum integrals are midpoint sums on nodes aligned with the box edges.
class SpinProjector {
 public:
  /// Modular-variable binning. The quadrature spacing is re-meshed so that an
  /// integer number of nodes fills each box.
  static SpinProjector modular(int cutoff, const ModularGrid& grid, const QuadGrid& quad);
  /// Sign binning: spin 0 for p < 0, spin 1 for p > 0, coherence pairs -|p| with +|p|.
  static SpinProjector sign(int cutoff, const QuadGrid& quad);

  int cutoff() const noexcept { return cutoff_; }
  int points_per_box() const noexcept { return points_per_box_; }
  double node_spacing() const noexcept { return spacing_; }
  const CMatrix& kernel(int n, int n_prime) const { return kernels_[2 * n + n_prime]; }

  EffectiveSpinState project_single(const DensityMatrix& rho) const;
  EffectiveSpinState project_joint(const DensityMatrix& rho) const;

 private:
  SpinProjector() = default;
  void check_mass(double raw_trace) const;

  int cutoff_ = 0;
  int points_per_box_ = 0;
  double spacing_ = 0.0;
  double min_raw_trace_ = 0.0;
  std::array<CMatrix, 4> kernels_;
};

EffectiveSpinState project_single(const DensityMatrix& rho, const ModularGrid& grid, const QuadGrid& quad);
EffectiveSpinState project_joint(const DensityMatrix& rho, const ModularGrid& grid, const QuadGrid& quad);
EffectiveSpinState sign_projection(const DensityMatrix& rho, const QuadGrid& quad);

}  // namespace magcat
