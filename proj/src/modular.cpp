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

#include "magcat/modular.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "magcat/error.hpp"

namespace magcat {

namespace {

// Rows are momentum nodes, columns Fock levels: out(k, j) = <p_k|j>.
CMatrix momentum_rows(int cutoff, double start, double spacing, int count, double reflect = 1.0) {
  const Complex phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  CMatrix out(count, cutoff);
  std::vector<double> psi(cutoff);
  for (int k = 0; k < count; ++k) {
    hermite_functions(reflect * (start + (k + 0.5) * spacing), cutoff, psi.data());
    for (int j = 0; j < cutoff; ++j) out(k, j) = phase[j % 4] * psi[j];
  }
  return out;
}

// sum_{jj'} a(j, j') b(j, j')
Complex contract(const CMatrix& a, const CMatrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

BoxLabel split_box_index(int box) {
  const int spin = ((box - 1) % 2 + 2) % 2;
  return {(box - 1 - spin) / 2, spin};
}

double optimal_modular_length(Complex alpha) {
  if (std::abs(alpha) == 0.0) throw ArgumentError("optimal_modular_length: amplitude must be nonzero");
  return 2.0 * std::numbers::sqrt2 * std::abs(alpha);
}

SpinProjector SpinProjector::modular(int cutoff, const ModularGrid& grid, const QuadGrid& quad) {
  if (!(grid.modular_length > 0.0)) throw ArgumentError("ModularGrid: modular_length must be positive");
  if (grid.index_max < grid.index_min) throw ArgumentError("ModularGrid: empty index window");

  const int per_box = static_cast<int>(std::lround(grid.modular_length / quad.spacing()));
  if (per_box < kMinPointsPerBox) {
    std::ostringstream msg;
    msg << "modular projection: only " << per_box << " quadrature points per box of length "
        << grid.modular_length << " (need " << kMinPointsPerBox << ")";
    throw ResolutionError(msg.str());
  }

  SpinProjector p;
  p.cutoff_ = cutoff;
  p.points_per_box_ = per_box;
  p.spacing_ = grid.modular_length / per_box;
  p.min_raw_trace_ = kMinWindowMass;
  for (auto& k : p.kernels_) k = CMatrix::Zero(cutoff, cutoff);

  const int boxes = grid.index_max - grid.index_min + 1;
  std::vector<CMatrix> rows(boxes);
  for (int b = 0; b < boxes; ++b)
    rows[b] = momentum_rows(cutoff, grid.offset + grid.modular_length * (grid.index_min + b), p.spacing_, per_box);

  const int cell_lo = split_box_index(grid.index_min).cell;
  const int cell_hi = split_box_index(grid.index_max).cell;
  for (int m = cell_lo; m <= cell_hi; ++m) {
    for (int n = 0; n < 2; ++n) {
      for (int np = 0; np < 2; ++np) {
        const int box = 2 * m + n + 1;
        const int box_p = 2 * m + np + 1;
        if (box < grid.index_min || box > grid.index_max || box_p < grid.index_min || box_p > grid.index_max) continue;
        p.kernels_[2 * n + np] +=
            p.spacing_ * rows[box - grid.index_min].transpose() * rows[box_p - grid.index_min].conjugate();
      }
    }
  }
  return p;
}

SpinProjector SpinProjector::sign(int cutoff, const QuadGrid& quad) {
  const double extent = std::max(std::abs(quad.minimum), std::abs(quad.maximum));
  const int count = static_cast<int>(std::lround(extent / quad.spacing()));
  if (count < 1) throw ResolutionError("sign projection: quadrature grid too coarse");

  SpinProjector p;
  p.cutoff_ = cutoff;
  p.points_per_box_ = count;
  p.spacing_ = extent / count;
  const CMatrix positive = momentum_rows(cutoff, 0.0, p.spacing_, count);
  const CMatrix negative = momentum_rows(cutoff, 0.0, p.spacing_, count, -1.0);
  const CMatrix* side[2] = {&negative, &positive};
  for (int n = 0; n < 2; ++n)
    for (int np = 0; np < 2; ++np) p.kernels_[2 * n + np] = p.spacing_ * side[n]->transpose() * side[np]->conjugate();
  return p;
}

void SpinProjector::check_mass(double raw_trace) const {
  if (raw_trace < min_raw_trace_) {
    std::ostringstream msg;
    msg << "modular projection: index window captures only " << raw_trace << " of the momentum mass (need "
        << min_raw_trace_ << ")";
    throw ResolutionError(msg.str());
  }
}

EffectiveSpinState SpinProjector::project_single(const DensityMatrix& rho) const {
  if (rho.space().modes() != 1 || rho.space().cutoff(0) != cutoff_)
    throw ArgumentError("project_single: single-mode state with matching cutoff required");
  EffectiveSpinState out{CMatrix(2, 2)};
  for (int n = 0; n < 2; ++n)
    for (int np = 0; np < 2; ++np) out.matrix(n, np) = contract(rho.matrix(), kernel(n, np));
  out.raw_trace = out.matrix.trace().real();
  check_mass(out.raw_trace);
  out.matrix /= out.raw_trace;
  return out;
}

EffectiveSpinState SpinProjector::project_joint(const DensityMatrix& rho) const {
  const ModeSpace& space = rho.space();
  if (space.modes() != 2 || space.cutoff(0) != cutoff_ || space.cutoff(1) != cutoff_)
    throw ArgumentError("project_joint: two-mode state with matching cutoffs required");
  const int n = cutoff_;
  const CMatrix& r = rho.matrix();

  // Contract the second mode first: partial[a][j, j'] = sum_{kk'} rho[(j,k),(j',k')] K^a[k,k']
  std::array<CMatrix, 4> partial;
  for (int a = 0; a < 4; ++a) {
    partial[a].resize(n, n);
    for (int j = 0; j < n; ++j)
      for (int jp = 0; jp < n; ++jp) partial[a](j, jp) = contract(r.block(j * n, jp * n, n, n), kernels_[a]);
  }

  EffectiveSpinState out{CMatrix(4, 4)};
  for (int n1 = 0; n1 < 2; ++n1)
    for (int n2 = 0; n2 < 2; ++n2)
      for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2)
          out.matrix(2 * n1 + n2, 2 * m1 + m2) = contract(kernel(n1, m1), partial[2 * n2 + m2]);
  out.raw_trace = out.matrix.trace().real();
  check_mass(out.raw_trace);
  out.matrix /= out.raw_trace;
  return out;
}

EffectiveSpinState project_single(const DensityMatrix& rho, const ModularGrid& grid, const QuadGrid& quad) {
  return SpinProjector::modular(static_cast<int>(rho.space().dim()), grid, quad).project_single(rho);
}

EffectiveSpinState project_joint(const DensityMatrix& rho, const ModularGrid& grid, const QuadGrid& quad) {
  if (rho.space().modes() != 2) throw ArgumentError("project_joint: two-mode state required");
  return SpinProjector::modular(rho.space().cutoff(0), grid, quad).project_joint(rho);
}

EffectiveSpinState sign_projection(const DensityMatrix& rho, const QuadGrid& quad) {
  if (rho.space().modes() != 1) throw ArgumentError("sign_projection: single-mode state required");
  return SpinProjector::sign(static_cast<int>(rho.space().dim()), quad).project_single(rho);
}

std::string to_json(const EffectiveSpinState& state) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < state.matrix.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < state.matrix.cols(); ++j)
      row.push_back({state.matrix(i, j).real(), state.matrix(i, j).imag()});
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["dimension"] = state.matrix.rows();
  j["raw_trace"] = state.raw_trace;
  j["matrix"] = std::move(rows);
  return j.dump(2);
}

EffectiveSpinState effective_spin_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("effective spin JSON: ") + e.what());
  }
  const auto& rows = j.at("matrix");
  const auto dim = static_cast<Eigen::Index>(rows.size());
  if (dim != 2 && dim != 4) throw ArgumentError("effective spin JSON: dimension must be 2 or 4");
  EffectiveSpinState s{CMatrix(dim, dim), j.value("raw_trace", 1.0)};
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != dim) throw ArgumentError("effective spin JSON: ragged matrix");
    for (Eigen::Index c = 0; c < dim; ++c) s.matrix(r, c) = Complex(rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>());
  }
  return s;
}

}  // namespace magcat
