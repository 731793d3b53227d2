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

#include "magcat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magcat/error.hpp"

namespace magcat {

EffectiveParams effective_params(const EffectiveParamsInput& in) {
  const double delta_c = in.omega_c - 0.5 * in.omega_d;
  const double delta_m = in.omega_m - 0.5 * in.omega_d;
  const double g2 = std::norm(in.coupling_g);
  const double denom = delta_c * delta_c - std::norm(in.pump_G);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "effective_params: Delta_c^2 - |G|^2 = " << denom << " must be positive";
    throw ArgumentError(msg.str());
  }
  EffectiveParams out;
  out.params.delta = delta_m - g2 * delta_c / denom;
  out.params.pump = g2 * in.pump_G / (2.0 * denom);
  out.params.kerr = in.kerr;
  out.weak_detuning = std::abs(delta_c) < 10.0 * std::abs(in.coupling_g);
  return out;
}

double cross_talk_from_detuned_mode(double coupling, double detuning) {
  if (detuning == 0.0) throw ArgumentError("cross_talk_from_detuned_mode: detuning must be nonzero");
  return coupling * coupling / detuning;
}

bool parametric_stability(double delta, double pump_magnitude) {
  return std::abs(delta) > 2.0 * std::abs(pump_magnitude);
}

Operator single_mode_hamiltonian(const SingleModeParams& p, int cutoff) {
  const ModeSpace space = ModeSpace::single(cutoff);
  const Operator b = annihilation(space, 0);
  const Operator bd = b.adjoint();
  const Operator bb = b * b;
  const Operator bdbd = bd * bd;
  return Complex(p.delta) * (bd * b) + std::conj(p.pump) * bdbd + p.pump * bb +
         Complex(0.5 * p.kerr) * (bdbd * bb);
}

Operator two_mode_hamiltonian(const TwoModeParams& p, int cutoff) {
  const ModeSpace space = ModeSpace::pair(cutoff);
  const Operator b1 = annihilation(space, 0);
  const Operator b2 = annihilation(space, 1);
  const Operator b1d = b1.adjoint();
  const Operator b2d = b2.adjoint();
  const Operator squares = b1 * b1 + b1d * b1d + b2 * b2 + b2d * b2d;
  const Operator kerr = b1d * b1d * b1 * b1 + b2d * b2d * b2 * b2;
  const Operator number = b1d * b1 + b2d * b2;
  const Operator hopping = b1d * b2 + b1 * b2d;
  return Complex(p.pump) * squares + Complex(0.5 * p.kerr) * kerr + Complex(p.delta) * number +
         Complex(p.cross_talk) * hopping;
}

Operator collective_loss(double gamma_c, int cutoff) {
  if (gamma_c < 0.0) throw ArgumentError("collective_loss: rate must be non-negative");
  const ModeSpace space = ModeSpace::pair(cutoff);
  return Complex(std::sqrt(gamma_c)) * (annihilation(space, 0) + annihilation(space, 1));
}

Operator local_loss(double gamma_s, std::size_t mode, int cutoff) {
  if (gamma_s < 0.0) throw ArgumentError("local_loss: rate must be non-negative");
  const ModeSpace space = ModeSpace::pair(cutoff);
  return Complex(std::sqrt(gamma_s)) * annihilation(space, mode);
}

LindbladModel single_mode_model(const SingleModeParams& p, int cutoff, double local_loss_rate) {
  if (p.kerr < 0.0) throw ArgumentError("single_mode_model: Kerr coefficient must be non-negative");
  if (local_loss_rate < 0.0) throw ArgumentError("single_mode_model: loss rate must be non-negative");
  LindbladModel model{single_mode_hamiltonian(p, cutoff), {}};
  if (local_loss_rate > 0.0) {
    const ModeSpace space = ModeSpace::single(cutoff);
    model.collapse_ops.push_back(Complex(std::sqrt(local_loss_rate)) * annihilation(space, 0));
  }
  return model;
}

LindbladModel two_mode_model(const TwoModeParams& p, int cutoff) {
  if (p.collective_rate < 0.0 || p.local_loss_rate < 0.0)
    throw ArgumentError("two_mode_model: rates must be non-negative");
  LindbladModel model{two_mode_hamiltonian(p, cutoff), {}};
  if (p.collective_rate > 0.0) model.collapse_ops.push_back(collective_loss(p.collective_rate, cutoff));
  if (p.local_loss_rate > 0.0) {
    model.collapse_ops.push_back(local_loss(p.local_loss_rate, 0, cutoff));
    model.collapse_ops.push_back(local_loss(p.local_loss_rate, 1, cutoff));
  }
  return model;
}

// ---------------------------------------------------------------- kernel

SplitMatrix::SplitMatrix(Eigen::Index d) : re(RealRows::Zero(d, d)), im(RealRows::Zero(d, d)) {}

SplitMatrix::SplitMatrix(const CMatrix& m) : re(m.real()), im(m.imag()) {}

CMatrix SplitMatrix::to_complex() const {
  CMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

std::vector<LindbladKernel::Diagonal> LindbladKernel::compress(const CMatrix& m) {
  const Eigen::Index d = m.rows();
  std::vector<Diagonal> out;
  for (Eigen::Index off = -(d - 1); off < d; ++off) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, -off);
    const Eigen::Index hi = std::min<Eigen::Index>(d, d - off);
    Eigen::Index first = hi, last = lo;
    for (Eigen::Index r = lo; r < hi; ++r) {
      if (m(r, r + off) != Complex(0.0, 0.0)) {
        first = std::min(first, r);
        last = r + 1;
      }
    }
    if (first >= last) continue;
    Diagonal g{off, first, last, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
    for (Eigen::Index r = first; r < last; ++r) {
      g.re(r) = m(r, r + off).real();
      g.im(r) = m(r, r + off).imag();
    }
    out.push_back(std::move(g));
  }
  return out;
}

// y(c) += a(r, r + off) x(r + off, c) for c >= c0, summed over the diagonals of a
void LindbladKernel::accumulate_left(const std::vector<Diagonal>& a, const SplitMatrix& x, Eigen::Index r,
                                     Eigen::Index c0, double* yr, double* yi) const {
  for (const Diagonal& g : a) {
    if (r < g.first || r >= g.last) continue;
    const double vr = g.re(r), vi = g.im(r);
    if (vr == 0.0 && vi == 0.0) continue;
    const double* xr = x.re.row(r + g.offset).data();
    const double* xi = x.im.row(r + g.offset).data();
    for (Eigen::Index c = c0; c < dim_; ++c) {
      yr[c] += vr * xr[c] - vi * xi[c];
      yi[c] += vr * xi[c] + vi * xr[c];
    }
  }
}

// y(k + off) += x(k) a(k, k + off) for k + off >= c0
void LindbladKernel::accumulate_right(const double* xr, const double* xi, const std::vector<Diagonal>& a,
                                      Eigen::Index c0, double* yr, double* yi) {
  for (const Diagonal& g : a) {
    const double* wr = g.re.data();
    const double* wi = g.im.data();
    double* zr = yr + g.offset;
    double* zi = yi + g.offset;
    for (Eigen::Index k = std::max(g.first, c0 - g.offset); k < g.last; ++k) {
      zr[k] += xr[k] * wr[k] - xi[k] * wi[k];
      zi[k] += xr[k] * wi[k] + xi[k] * wr[k];
    }
  }
}

LindbladKernel::LindbladKernel(const LindbladModel& model) : dim_(model.hamiltonian.space().dim()) {
  CMatrix heff = model.hamiltonian.matrix();
  for (const Operator& l : model.collapse_ops) {
    if (!(l.space() == model.hamiltonian.space())) throw ArgumentError("LindbladKernel: collapse operator space mismatch");
    heff -= Complex(0.0, 0.5) * (l.matrix().adjoint() * l.matrix());
    collapse_.push_back(compress(l.matrix()));
    collapse_adjoint_.push_back(compress(l.matrix().adjoint()));
    for (const Diagonal& g : collapse_adjoint_.back()) jump_margin_ = std::max(jump_margin_, std::abs(g.offset));
  }
  const Complex i(0.0, 1.0);
  left_ = compress(-i * heff);
  right_ = compress(i * heff.adjoint());
  row_re_.resize(dim_);
  row_im_.resize(dim_);
  jump_re_.resize(dim_);
  jump_im_.resize(dim_);
}

// Columns [c0, dim) of row r of -i Heff x + i x Heff^dag + sum_k (L_k x) L_k^dag.
// Every term only needs row r of a left product, so nothing larger than a row
// is buffered.
void LindbladKernel::evaluate_row(const SplitMatrix& x, Eigen::Index r, Eigen::Index c0) {
  double* yr = row_re_.data();
  double* yi = row_im_.data();
  row_re_.setZero();
  row_im_.setZero();
  accumulate_left(left_, x, r, c0, yr, yi);
  accumulate_right(x.re.row(r).data(), x.im.row(r).data(), right_, c0, yr, yi);
  const Eigen::Index j0 = std::max<Eigen::Index>(0, c0 - jump_margin_);
  for (std::size_t k = 0; k < collapse_.size(); ++k) {
    jump_re_.setZero();
    jump_im_.setZero();
    accumulate_left(collapse_[k], x, r, j0, jump_re_.data(), jump_im_.data());
    accumulate_right(jump_re_.data(), jump_im_.data(), collapse_adjoint_[k], c0, yr, yi);
  }
}

void LindbladKernel::apply(const SplitMatrix& rho, SplitMatrix& out) {
  if (rho.re.rows() != dim_ || rho.re.cols() != dim_) throw ArgumentError("LindbladKernel: dimension mismatch");
  out.re.resize(dim_, dim_);
  out.im.resize(dim_, dim_);
  for (Eigen::Index r = 0; r < dim_; ++r) {
    evaluate_row(rho, r, 0);
    out.re.row(r) = row_re_.transpose();
    out.im.row(r) = row_im_.transpose();
  }
}

void LindbladKernel::stage(const SplitMatrix& input, const SplitMatrix& base, double next_scale, SplitMatrix* next,
                           double acc_scale, SplitMatrix& acc) {
  for (Eigen::Index r = 0; r < dim_; ++r) {
    evaluate_row(input, r, r);
    const Eigen::Index n = dim_ - r;
    acc.re.row(r).tail(n) += acc_scale * row_re_.tail(n).transpose();
    acc.im.row(r).tail(n) += acc_scale * row_im_.tail(n).transpose();
    if (next) {
      next->re.row(r).tail(n) = base.re.row(r).tail(n) + next_scale * row_re_.tail(n).transpose();
      next->im.row(r).tail(n) = base.im.row(r).tail(n) + next_scale * row_im_.tail(n).transpose();
    }
  }
  if (next) mirror_upper(*next);
}

void mirror_upper(SplitMatrix& m) {
  const Eigen::Index d = m.re.rows();
  for (Eigen::Index r = 0; r < d; ++r) {
    m.im(r, r) = 0.0;
    for (Eigen::Index c = r + 1; c < d; ++c) {
      m.re(c, r) = m.re(r, c);
      m.im(c, r) = -m.im(r, c);
    }
  }
}

CMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) {
  if (!(rho.space() == model.hamiltonian.space())) throw ArgumentError("lindblad_rhs: dimension mismatch");
  LindbladKernel kernel(model);
  SplitMatrix out(kernel.dim());
  kernel.apply(SplitMatrix(rho.matrix()), out);
  return out.to_complex();
}

// ---------------------------------------------------------------- integrator

EvolveStats evolve_streaming(const LindbladModel& model, const DensityMatrix& rho0, const EvolveOptions& options,
                             const FrameObserver& observer) {
  if (!(options.dt > 0.0)) throw ArgumentError("evolve: dt must be positive");
  if (!(options.t_final >= 0.0)) throw ArgumentError("evolve: t_final must be non-negative");
  if (options.save_every == 0) throw ArgumentError("evolve: save_every must be >= 1");
  if (!(rho0.space() == model.hamiltonian.space())) throw ArgumentError("evolve: dimension mismatch");

  LindbladKernel kernel(model);
  const Eigen::Index d = kernel.dim();
  const ModeSpace& space = rho0.space();

  EvolveStats stats;
  stats.steps =
      options.t_final == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(options.t_final / options.dt - 1e-9));
  const double h = stats.steps == 0 ? 0.0 : options.t_final / static_cast<double>(stats.steps);

  SplitMatrix rho(rho0.matrix());
  SplitMatrix acc(d), t1(d), t2(d);

  auto emit = [&](double t) {
    observer(t, DensityMatrix(space, rho.to_complex()));
    ++stats.frames;
  };
  emit(0.0);

  for (std::size_t step = 1; step <= stats.steps; ++step) {
    // classical RK4, each stage fused with the accumulation of its slope
    acc = rho;
    kernel.stage(rho, rho, 0.5 * h, &t1, h / 6.0, acc);
    kernel.stage(t1, rho, 0.5 * h, &t2, h / 3.0, acc);
    kernel.stage(t2, rho, h, &t1, h / 3.0, acc);
    kernel.stage(t1, rho, 0.0, nullptr, h / 6.0, acc);
    std::swap(rho, acc);

    const double trace = rho.re.trace();
    const double drift = std::abs(trace - 1.0);
    if (!std::isfinite(trace) || drift > options.max_step_trace_drift) {
      std::ostringstream msg;
      msg << "evolve: step " << step << " rejected, trace drift " << drift << " exceeds "
          << options.max_step_trace_drift << " (reduce dt)";
      throw NumericsError(msg.str());
    }
    // RK4 conserves the trace even while diverging, so also watch the populations
    const double lowest = rho.re.diagonal().minCoeff() / trace;
    const double highest = rho.re.diagonal().maxCoeff() / trace;
    if (lowest < -options.max_step_trace_drift || highest > 1.0 + options.max_step_trace_drift) {
      std::ostringstream msg;
      msg << "evolve: step " << step << " rejected, population " << (lowest < 0.0 ? lowest : highest)
          << " outside [0, 1] (reduce dt)";
      throw NumericsError(msg.str());
    }
    stats.max_trace_drift = std::max(stats.max_trace_drift, drift);
    // the stages only produce the upper triangle, so mirroring it is the Hermitization
    mirror_upper(rho);
    rho.re /= trace;
    rho.im /= trace;

    if (step % options.save_every == 0 || step == stats.steps) emit(h * static_cast<double>(step));
  }
  return stats;
}

Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, const EvolveOptions& options) {
  Trajectory traj;
  const EvolveStats stats = evolve_streaming(model, rho0, options, [&traj](double t, const DensityMatrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
  });
  traj.steps = stats.steps;
  traj.max_trace_drift = stats.max_trace_drift;
  return traj;
}

}  // namespace magcat
