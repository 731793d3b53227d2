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

#include <string_view>

#include <Eigen/Dense>

#include "magcat/hilbert.hpp"
#include "magcat/modular.hpp"

namespace magcat {

enum class BellVariant { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string_view to_string(BellVariant v);
BellVariant bell_variant_from_string(std::string_view name);

using Matrix2c = Eigen::Matrix2cd;

/// Local dichotomic observables for the CHSH combination
/// Q = <A0 B0> + <A0 B1> - <A1 B0> + <A1 B1>.
struct BellSetting {
  Matrix2c a0;
  Matrix2c a1;
  Matrix2c b0;
  Matrix2c b1;
};

/// Observable quadruple that maximally violates CHSH for the given Bell state.
BellSetting bell_setting(BellVariant variant);

/// The Bell state itself, |Phi+-> = (|00> +- |11>)/sqrt2, |Psi+-> = (|01> +- |10>)/sqrt2.
Eigen::Vector4cd bell_state(BellVariant variant);

/// Signed CHSH value on a 4x4 two-qubit density matrix.
double chsh_qualifier(const Eigen::Ref<const CMatrix>& rho, const BellSetting& setting);
double chsh_qualifier(const EffectiveSpinState& rho, const BellSetting& setting);

/// |Q| > 2, strictly.
bool is_entangled_by_chsh(double q);

}  // namespace magcat
