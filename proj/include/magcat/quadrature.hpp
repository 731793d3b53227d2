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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magcat/hilbert.hpp"

namespace magcat {

/// Uniform grid over a dimensionless quadrature, x = (b + b^dag)/sqrt(2) or
/// p = -i (b - b^dag)/sqrt(2). Both endpoints are grid points.
struct QuadGrid {
  double minimum = -12.0;
  double maximum = 12.0;
  int count = 2401;

  QuadGrid() = default;
  QuadGrid(double min, double max, int n);

  double spacing() const { return (maximum - minimum) / (count - 1); }
  double at(int i) const { return minimum + spacing() * i; }
  std::vector<double> points() const;

  bool operator==(const QuadGrid&) const = default;
};

QuadGrid default_wigner_grid();    // [-6, 6], 201 points
QuadGrid default_momentum_grid();  // [-12, 12], 2401 points

/// Values of the Hermite functions psi_n(q) for n < cutoff at a single point,
/// by the normalized three-term recurrence.
void hermite_functions(double q, int cutoff, double* out);

/// M[k, n] = <p_k|n> = (-i)^n psi_n(p_k). Warns (returns false through
/// `faithful`) when the grid does not span [-sqrt(2N), sqrt(2N)].
CMatrix hermite_basis(int cutoff, const QuadGrid& grid, bool* faithful = nullptr);

/// diag(M rho M^dag) on the grid for a single-mode state.
std::vector<double> momentum_density(const DensityMatrix& rho, const QuadGrid& grid);

struct WignerMap {
  QuadGrid x_grid;
  QuadGrid p_grid;
  Eigen::MatrixXd values;  // values(i, j) = W(x_i, p_j)

  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
  /// Riemann sum of W over the grid.
  double integral() const;
};

/// W(x, p) = (1/pi) tr[rho D(a) Parity D(a)^dag], a = (x + i p)/sqrt(2), so the
/// vacuum peaks at 1/pi and W integrates to 1 over dx dp.
WignerMap wigner(const DensityMatrix& rho, const QuadGrid& x_grid, const QuadGrid& p_grid);

/// "x,p,W" rows with a header line.
void write_wigner_csv(const WignerMap& map, const std::string& path);
std::string wigner_header_json(const WignerMap& map);

}  // namespace magcat
