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

#include "magcat/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "magcat/error.hpp"

namespace magcat {

QuadGrid::QuadGrid(double min, double max, int n) : minimum(min), maximum(max), count(n) {
  if (count < 2) throw ArgumentError("QuadGrid: count must be >= 2");
  if (!(maximum > minimum)) throw ArgumentError("QuadGrid: maximum must exceed minimum");
}

std::vector<double> QuadGrid::points() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

QuadGrid default_wigner_grid() { return QuadGrid(-6.0, 6.0, 201); }
QuadGrid default_momentum_grid() { return QuadGrid(-12.0, 12.0, 2401); }

void hermite_functions(double q, int cutoff, double* out) {
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q);
  if (cutoff > 1) out[1] = std::sqrt(2.0) * q * out[0];
  for (int n = 1; n + 1 < cutoff; ++n)
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * q * out[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[n - 1];
}

CMatrix hermite_basis(int cutoff, const QuadGrid& grid, bool* faithful) {
  if (cutoff < 1) throw ArgumentError("hermite_basis: cutoff must be positive");
  const double reach = std::sqrt(2.0 * cutoff);
  if (faithful) *faithful = grid.minimum <= -reach && grid.maximum >= reach;

  // (-i)^n cycles through 1, -i, -1, i
  const Complex phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  CMatrix m(grid.count, cutoff);
  std::vector<double> psi(cutoff);
  for (int k = 0; k < grid.count; ++k) {
    hermite_functions(grid.at(k), cutoff, psi.data());
    for (int n = 0; n < cutoff; ++n) m(k, n) = phase[n % 4] * psi[n];
  }
  return m;
}

std::vector<double> momentum_density(const DensityMatrix& rho, const QuadGrid& grid) {
  if (rho.space().modes() != 1) throw ArgumentError("momentum_density: single-mode state required");
  const CMatrix m = hermite_basis(rho.space().dim(), grid);
  const CMatrix mr = m * rho.matrix();
  std::vector<double> out(grid.count);
  for (int k = 0; k < grid.count; ++k) out[k] = mr.row(k).dot(m.row(k)).real();  // sum_j mr(k,j) conj(m(k,j))
  return out;
}

double WignerMap::integral() const { return values.sum() * x_grid.spacing() * p_grid.spacing(); }

WignerMap wigner(const DensityMatrix& rho, const QuadGrid& x_grid, const QuadGrid& p_grid) {
  if (rho.space().modes() != 1) throw ArgumentError("wigner: single-mode state required");
  const int n = static_cast<int>(rho.space().dim());
  const CMatrix& r = rho.matrix();

  // sqrt(m!/(m+k)!) for every m, k
  Eigen::MatrixXd ratio(n, n);
  for (int m = 0; m < n; ++m) {
    double acc = 1.0;
    ratio(m, 0) = 1.0;
    for (int k = 1; m + k < n; ++k) {
      acc /= std::sqrt(static_cast<double>(m + k));
      ratio(m, k) = acc;
    }
  }

  WignerMap map{x_grid, p_grid, Eigen::MatrixXd(x_grid.count, p_grid.count)};
  std::vector<double> lag(n);
  for (int i = 0; i < x_grid.count; ++i) {
    for (int j = 0; j < p_grid.count; ++j) {
      const Complex alpha = Complex(x_grid.at(i), p_grid.at(j)) / std::numbers::sqrt2;
      const double b = 4.0 * std::norm(alpha);
      double w = 0.0;
      Complex power = 1.0;  // (2 alpha)^k
      for (int k = 0; k < n; ++k) {
        // generalized Laguerre L_m^{(k)}(b), m = 0 .. n-1-k
        const int top = n - k;
        lag[0] = 1.0;
        if (top > 1) lag[1] = 1.0 + k - b;
        for (int m = 1; m + 1 < top; ++m) lag[m + 1] = ((2.0 * m + 1.0 + k - b) * lag[m] - (m + k) * lag[m - 1]) / (m + 1);
        double term = 0.0;
        for (int m = 0; m < top; ++m) {
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          const Complex c = r(m, m + k) * power;
          term += sign * ratio(m, k) * lag[m] * c.real();
        }
        w += (k == 0 ? 1.0 : 2.0) * term;
        power *= 2.0 * alpha;
      }
      map.values(i, j) = w * std::exp(-0.5 * b) / std::numbers::pi;
    }
  }
  return map;
}

void write_wigner_csv(const WignerMap& map, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::fputs("x,p,W\n", f);
  for (int i = 0; i < map.x_grid.count; ++i)
    for (int j = 0; j < map.p_grid.count; ++j)
      std::fprintf(f, "%.10g,%.10g,%.12e\n", map.x_grid.at(i), map.p_grid.at(j), map.values(i, j));
  if (std::fclose(f) != 0) throw IoError("failed writing " + path);
}

std::string wigner_header_json(const WignerMap& map) {
  auto grid = [](const QuadGrid& g) {
    return nlohmann::ordered_json{{"min", g.minimum}, {"max", g.maximum}, {"count", g.count}};
  };
  nlohmann::ordered_json j;
  j["quantity"] = "wigner";
  j["normalization"] = "integral over dx dp equals 1; vacuum peak 1/pi";
  j["x_grid"] = grid(map.x_grid);
  j["p_grid"] = grid(map.p_grid);
  j["min"] = map.min();
  j["max"] = map.max();
  j["integral"] = map.integral();
  return j.dump(2);
}

}  // namespace magcat
