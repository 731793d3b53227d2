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

#include "magcat/bell.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "magcat/error.hpp"

namespace magcat {

namespace {

Matrix2c sigma_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2c sigma_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix4cd kron2(const Matrix2c& a, const Matrix2c& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

std::string_view to_string(BellVariant v) {
  switch (v) {
    case BellVariant::PhiPlus: return "PhiPlus";
    case BellVariant::PhiMinus: return "PhiMinus";
    case BellVariant::PsiPlus: return "PsiPlus";
    case BellVariant::PsiMinus: return "PsiMinus";
  }
  return "?";
}

BellVariant bell_variant_from_string(std::string_view name) {
  for (BellVariant v : {BellVariant::PhiPlus, BellVariant::PhiMinus, BellVariant::PsiPlus, BellVariant::PsiMinus})
    if (name == to_string(v)) return v;
  throw ArgumentError("unknown Bell variant '" + std::string(name) + "'");
}

BellSetting bell_setting(BellVariant variant) {
  const Matrix2c x = sigma_x();
  const Matrix2c z = sigma_z();
  const double r = std::numbers::sqrt2;
  switch (variant) {
    case BellVariant::PhiPlus: return {z, x, (z - x) / r, (x + z) / r};
    case BellVariant::PhiMinus: return {x, z, -(x + z) / r, (z - x) / r};
    case BellVariant::PsiPlus: return {z, x, -(x + z) / r, (x - z) / r};
    case BellVariant::PsiMinus: return {x, z, (z - x) / r, -(z + x) / r};
  }
  throw ArgumentError("bell_setting: bad variant");
}

Eigen::Vector4cd bell_state(BellVariant variant) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (variant) {
    case BellVariant::PhiPlus: v(0) = r; v(3) = r; break;
    case BellVariant::PhiMinus: v(0) = r; v(3) = -r; break;
    case BellVariant::PsiPlus: v(1) = r; v(2) = r; break;
    case BellVariant::PsiMinus: v(1) = r; v(2) = -r; break;
  }
  return v;
}

double chsh_qualifier(const Eigen::Ref<const CMatrix>& rho, const BellSetting& s) {
  if (rho.rows() != 4 || rho.cols() != 4) throw ArgumentError("chsh_qualifier: 4x4 density matrix required");
  auto e = [&rho](const Matrix2c& a, const Matrix2c& b) { return (rho * kron2(a, b)).trace(); };
  const Complex q = e(s.a0, s.b0) + e(s.a0, s.b1) - e(s.a1, s.b0) + e(s.a1, s.b1);
  return q.real();
}

double chsh_qualifier(const EffectiveSpinState& rho, const BellSetting& setting) {
  return chsh_qualifier(rho.matrix, setting);
}

bool is_entangled_by_chsh(double q) { return std::abs(q) > 2.0; }

}  // namespace magcat
