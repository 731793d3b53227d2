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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace magcat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Shape of a multi-mode truncated Fock space. Mode 0 is the most significant
/// index of the flattened basis, so |n0 n1> sits at n0 * N1 + n1.
class ModeSpace {
 public:
  explicit ModeSpace(std::vector<int> cutoffs);

  static ModeSpace single(int cutoff) { return ModeSpace({cutoff}); }
  static ModeSpace pair(int cutoff) { return ModeSpace({cutoff, cutoff}); }

  std::size_t modes() const noexcept { return cutoffs_.size(); }
  int cutoff(std::size_t mode) const;
  const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
  Eigen::Index dim() const noexcept { return dim_; }

  ModeSpace concat(const ModeSpace& other) const;

  bool operator==(const ModeSpace& other) const noexcept { return cutoffs_ == other.cutoffs_; }

 private:
  std::vector<int> cutoffs_;
  Eigen::Index dim_ = 1;
};

class StateVector;

class Operator {
 public:
  Operator(ModeSpace space, CMatrix matrix);

  static Operator identity(const ModeSpace& space);
  static Operator zero(const ModeSpace& space);

  const ModeSpace& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

  Operator adjoint() const;
  bool is_hermitian(double tolerance) const;
  StateVector apply(const StateVector& psi) const;

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  friend Operator operator*(Complex scale, const Operator& op);

 private:
  ModeSpace space_;
  CMatrix matrix_;
};

class StateVector {
 public:
  StateVector(ModeSpace space, CVector amplitudes);

  /// Product Fock state |n0 n1 ...>.
  static StateVector fock(const ModeSpace& space, std::span<const int> occupations);
  static StateVector vacuum(const ModeSpace& space);

  const ModeSpace& space() const noexcept { return space_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  StateVector normalized() const;
  /// <this|other>
  Complex inner(const StateVector& other) const;

 private:
  ModeSpace space_;
  CVector amplitudes_;
};

inline constexpr double kHermitianTolerance = 1e-9;
inline constexpr double kTraceTolerance = 1e-7;
inline constexpr double kPositivityTolerance = 1e-7;

/// Density operator. Construction only checks the shape; call validate() for
/// the full Hermitian / unit-trace / positive check.
class DensityMatrix {
 public:
  DensityMatrix(ModeSpace space, CMatrix matrix);

  static DensityMatrix pure(const StateVector& psi);
  /// sum_i w_i |psi_i><psi_i|; weights are used as given.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const StateVector> states);

  const ModeSpace& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double purity() const;
  /// Largest |rho - rho^dagger| element.
  double hermiticity_defect() const;
  double min_eigenvalue() const;

  /// Throws NumericsError naming the violated invariant.
  void validate(double hermitian_tol = kHermitianTolerance, double trace_tol = kTraceTolerance,
                double positivity_tol = kPositivityTolerance) const;

  Complex expectation(const Operator& op) const;

 private:
  ModeSpace space_;
  CMatrix matrix_;
};

Operator tensor(const Operator& a, const Operator& b);
StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Ladder operator b for `mode`, embedded with identities on the other modes.
Operator annihilation(const ModeSpace& space, std::size_t mode);
Operator creation(const ModeSpace& space, std::size_t mode);
Operator number(const ModeSpace& space, std::size_t mode);

/// Poisson mass that a coherent state loses to the Fock cutoff.
struct TruncationReport {
  double captured_norm = 1.0;  // norm of the cut amplitudes before renormalization
  double tail = 0.0;           // 1 - captured_norm^2
  bool warn = false;           // tail above kTruncationTailWarning
};

inline constexpr double kTruncationTailWarning = 1e-4;

TruncationReport coherent_truncation(Complex alpha, int cutoff);

StateVector coherent_state(Complex alpha, int cutoff, TruncationReport* report = nullptr);
/// Even cat (|a> + |-a>) / sqrt(2 + eps_s).
StateVector cat_state(Complex alpha, int cutoff, TruncationReport* report = nullptr);
/// Product of two even cats on a two-mode space.
StateVector separable_cat(Complex alpha, int cutoff, TruncationReport* report = nullptr);
/// (|a>|-a> + |-a>|a>) / sqrt(2 + eps_ent), the dark state of b1 + b2.
StateVector entangled_cat(Complex alpha, int cutoff, TruncationReport* report = nullptr);

/// Closed-form <beta|alpha> for untruncated coherent states.
Complex coherent_overlap(Complex beta, Complex alpha);

double cat_norm_correction(Complex alpha);            // eps_s   = 2 exp(-2|a|^2)
double separable_cat_norm_correction(Complex alpha);  // eps_sep = 2 exp(-2|a|^2)
double entangled_cat_norm_correction(Complex alpha);  // eps_ent = 2 exp(-4|a|^2)

/// <psi|rho|psi>, clamped into [0, 1].
double fidelity(const DensityMatrix& rho, const StateVector& psi);

/// Reduced state of `keep_mode` for a two-mode density matrix.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep_mode);

}  // namespace magcat
