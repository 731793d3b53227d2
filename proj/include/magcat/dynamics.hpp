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
#include <functional>
#include <vector>

#include "magcat/hilbert.hpp"

namespace magcat {

/// H = delta b^dag b + S^* b^dag^2 + S b^2 + (K/2) b^dag^2 b^2
struct SingleModeParams {
  double delta = 1.0;
  Complex pump{0.0, 0.0};
  double kerr = 0.0;
};

/// Two Kerr modes with a real two-photon pump, hopping g, collective loss
/// sqrt(gamma_c)(b1 + b2) and local loss sqrt(gamma_s) b_i.
struct TwoModeParams {
  double delta = 1.0;
  double pump = 0.0;
  double kerr = 0.0;
  double cross_talk = 0.0;
  double collective_rate = 0.0;
  double local_loss_rate = 0.0;
};

/// Cavity + magnon description before the cavity is eliminated.
struct EffectiveParamsInput {
  double omega_c = 0.0;
  double omega_m = 0.0;
  double omega_d = 0.0;
  Complex coupling_g{0.0, 0.0};
  Complex pump_G{0.0, 0.0};
  double kerr = 0.0;

  bool operator==(const EffectiveParamsInput&) const = default;
};

struct EffectiveParams {
  SingleModeParams params;
  /// Set when |Delta_c| < 10 |g|, i.e. the cavity is not far detuned.
  bool weak_detuning = false;
};

EffectiveParams effective_params(const EffectiveParamsInput& input);

/// Cross-talk g^2/detuning induced by a far-detuned lossless mode coupled to both magnons.
double cross_talk_from_detuned_mode(double coupling, double detuning);

/// True iff |delta| > 2 |pump|; the boundary counts as unstable.
bool parametric_stability(double delta, double pump_magnitude);

Operator single_mode_hamiltonian(const SingleModeParams& p, int cutoff);
Operator two_mode_hamiltonian(const TwoModeParams& p, int cutoff);
Operator collective_loss(double gamma_c, int cutoff);
Operator local_loss(double gamma_s, std::size_t mode, int cutoff);

/// Hamiltonian plus collapse operators with their rates folded in.
struct LindbladModel {
  Operator hamiltonian;
  std::vector<Operator> collapse_ops;
};

LindbladModel single_mode_model(const SingleModeParams& p, int cutoff, double local_loss_rate = 0.0);
LindbladModel two_mode_model(const TwoModeParams& p, int cutoff);

/// d rho/dt = -i[H, rho] + sum_k (L rho L^dag - {L^dag L, rho}/2)
CMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);

struct EvolveOptions {
  double t_final = 20.0;
  double dt = 5e-4;
  std::size_t save_every = 100;
  /// Largest tolerated |tr rho - 1| after a raw RK4 step.
  double max_step_trace_drift = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  /// Largest per-step |tr rho - 1| seen before renormalization.
  double max_trace_drift = 0.0;
  std::size_t steps = 0;
};

/// Fixed-step RK4. After each step rho is Hermitized and its trace reset to 1.
/// Saves the initial state, every `save_every`-th step and the final step.
/// Throws NumericsError when a raw step drifts the trace by more than
/// options.max_step_trace_drift or pushes a population outside [0, 1] by more
/// than the same amount.
Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, const EvolveOptions& options);

struct EvolveStats {
  std::size_t steps = 0;
  std::size_t frames = 0;
  double max_trace_drift = 0.0;
};

using FrameObserver = std::function<void(double time, const DensityMatrix& rho)>;

/// Same stepping as evolve(), handing each saved frame to `observer` instead of storing it.
EvolveStats evolve_streaming(const LindbladModel& model, const DensityMatrix& rho0, const EvolveOptions& options,
                             const FrameObserver& observer);

/// Complex matrix stored as separate row-major real and imaginary planes, the
/// layout the integrator works in.
struct SplitMatrix {
  using RealRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RealRows re;
  RealRows im;

  SplitMatrix() = default;
  explicit SplitMatrix(Eigen::Index dim);  // zero
  explicit SplitMatrix(const CMatrix& m);
  CMatrix to_complex() const;
};

/// Right-hand side evaluator for a fixed LindbladModel. Operators are kept as
/// their nonzero diagonals, which for ladder-operator models on the flattened
/// Fock basis is a handful of constant-offset bands. Output row r then only
/// depends on a narrow band of input rows, so the whole generator is applied
/// in one streaming pass without superoperators or transposes.
class LindbladKernel {
 public:
  explicit LindbladKernel(const LindbladModel& model);
  Eigen::Index dim() const noexcept { return dim_; }

  /// out = L(rho). Not thread-safe: row scratch buffers live in the kernel.
  void apply(const SplitMatrix& rho, SplitMatrix& out);

  /// One Runge-Kutta stage: with k = L(input), acc += acc_scale k and, when
  /// `next` is given, next = base + next_scale k. `input` and `base` must be
  /// Hermitian. Only the upper triangle of `acc` is updated; `next` is
  /// completed by mirroring. `next` must not alias `input`.
  void stage(const SplitMatrix& input, const SplitMatrix& base, double next_scale, SplitMatrix* next,
             double acc_scale, SplitMatrix& acc);

 private:
  struct Diagonal {
    Eigen::Index offset;  // entry (r, r + offset)
    Eigen::Index first;   // rows [first, last) hold the nonzero stretch
    Eigen::Index last;
    Eigen::VectorXd re;   // indexed by row
    Eigen::VectorXd im;
  };
  static std::vector<Diagonal> compress(const CMatrix& m);
  void accumulate_left(const std::vector<Diagonal>& a, const SplitMatrix& x, Eigen::Index r, Eigen::Index c0,
                       double* yr, double* yi) const;
  static void accumulate_right(const double* xr, const double* xi, const std::vector<Diagonal>& a, Eigen::Index c0,
                               double* yr, double* yi);
  void evaluate_row(const SplitMatrix& x, Eigen::Index r, Eigen::Index c0);

  Eigen::Index dim_;
  std::vector<Diagonal> left_;   // -i Heff, Heff = H - (i/2) sum L^dag L
  std::vector<Diagonal> right_;  // +i Heff^dag
  std::vector<std::vector<Diagonal>> collapse_;
  std::vector<std::vector<Diagonal>> collapse_adjoint_;
  Eigen::VectorXd row_re_, row_im_;
  Eigen::VectorXd jump_re_, jump_im_;
  Eigen::Index jump_margin_ = 0;  // widest offset among the L^dag diagonals
};

/// Copies the upper triangle onto the lower one as its conjugate and zeroes
/// the imaginary diagonal, leaving an exactly Hermitian matrix.
void mirror_upper(SplitMatrix& m);

}  // namespace magcat
