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

#include "magcat/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "magcat/error.hpp"

namespace magcat {

namespace {

void require_same_space(const ModeSpace& a, const ModeSpace& b, const char* what) {
  if (!(a == b)) throw ArgumentError(std::string(what) + ": mode spaces differ");
}

// Single-mode ladder matrix with a(n-1, n) = sqrt(n).
CMatrix ladder(int cutoff) {
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Cut coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), built recursively.
CVector raw_coherent(Complex alpha, int cutoff) {
  CVector c(cutoff);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cutoff; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

void merge(TruncationReport* into, const TruncationReport& r) {
  if (!into) return;
  if (r.tail >= into->tail) *into = r;
}

}  // namespace

// ---------------------------------------------------------------- ModeSpace

ModeSpace::ModeSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw ArgumentError("ModeSpace: at least one mode required");
  for (int n : cutoffs_) {
    if (n < 2) throw ArgumentError("ModeSpace: Fock cutoff must be >= 2, got " + std::to_string(n));
    dim_ *= n;
  }
}

int ModeSpace::cutoff(std::size_t mode) const {
  if (mode >= cutoffs_.size())
    throw ArgumentError("mode index " + std::to_string(mode) + " out of range for " +
                        std::to_string(cutoffs_.size()) + " mode(s)");
  return cutoffs_[mode];
}

ModeSpace ModeSpace::concat(const ModeSpace& other) const {
  std::vector<int> dims = cutoffs_;
  dims.insert(dims.end(), other.cutoffs_.begin(), other.cutoffs_.end());
  return ModeSpace(std::move(dims));
}

// ---------------------------------------------------------------- Operator

Operator::Operator(ModeSpace space, CMatrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
    throw ArgumentError("Operator: matrix shape does not match mode space dimension");
}

Operator Operator::identity(const ModeSpace& space) {
  return Operator(space, CMatrix::Identity(space.dim(), space.dim()));
}

Operator Operator::zero(const ModeSpace& space) { return Operator(space, CMatrix::Zero(space.dim(), space.dim())); }

Operator Operator::adjoint() const { return Operator(space_, matrix_.adjoint()); }

bool Operator::is_hermitian(double tolerance) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

StateVector Operator::apply(const StateVector& psi) const {
  require_same_space(space_, psi.space(), "Operator::apply");
  return StateVector(space_, matrix_ * psi.amplitudes());
}

Operator Operator::operator+(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator+");
  return Operator(space_, matrix_ + rhs.matrix_);
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator-");
  return Operator(space_, matrix_ - rhs.matrix_);
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "Operator::operator*");
  return Operator(space_, matrix_ * rhs.matrix_);
}

Operator operator*(Complex scale, const Operator& op) { return Operator(op.space_, scale * op.matrix_); }

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(ModeSpace space, CVector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim())
    throw ArgumentError("StateVector: amplitude count does not match mode space dimension");
}

StateVector StateVector::fock(const ModeSpace& space, std::span<const int> occupations) {
  if (occupations.size() != space.modes()) throw ArgumentError("StateVector::fock: one occupation per mode required");
  Eigen::Index index = 0;
  for (std::size_t m = 0; m < space.modes(); ++m) {
    if (occupations[m] < 0 || occupations[m] >= space.cutoff(m))
      throw ArgumentError("StateVector::fock: occupation beyond cutoff");
    index = index * space.cutoff(m) + occupations[m];
  }
  CVector v = CVector::Zero(space.dim());
  v(index) = 1.0;
  return StateVector(space, std::move(v));
}

StateVector StateVector::vacuum(const ModeSpace& space) {
  std::vector<int> zeros(space.modes(), 0);
  return fock(space, zeros);
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ArgumentError("StateVector::normalized: zero vector");
  return StateVector(space_, amplitudes_ / n);
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_space(space_, other.space_, "StateVector::inner");
  return amplitudes_.dot(other.amplitudes_);  // Eigen's dot conjugates the left argument
}

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(ModeSpace space, CMatrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
    throw ArgumentError("DensityMatrix: matrix shape does not match mode space dimension");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights, std::span<const StateVector> states) {
  if (weights.size() != states.size() || states.empty())
    throw ArgumentError("DensityMatrix::mixture: need one weight per state");
  CMatrix m = CMatrix::Zero(states[0].space().dim(), states[0].space().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    require_same_space(states[0].space(), states[i].space(), "DensityMatrix::mixture");
    m += weights[i] * states[i].amplitudes() * states[i].amplitudes().adjoint();
  }
  return DensityMatrix(states[0].space(), std::move(m));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

double DensityMatrix::hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const CMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double hermitian_tol, double trace_tol, double positivity_tol) const {
  std::ostringstream msg;
  if (const double d = hermiticity_defect(); d > hermitian_tol) {
    msg << "density matrix not Hermitian (defect " << d << ")";
    throw NumericsError(msg.str());
  }
  if (const double t = trace(); std::abs(t - 1.0) > trace_tol) {
    msg << "density matrix trace " << t << " differs from 1";
    throw NumericsError(msg.str());
  }
  if (const double e = min_eigenvalue(); e < -positivity_tol) {
    msg << "density matrix has negative eigenvalue " << e;
    throw NumericsError(msg.str());
  }
}

Complex DensityMatrix::expectation(const Operator& op) const {
  require_same_space(space_, op.space(), "DensityMatrix::expectation");
  // tr(rho A) = sum_ij rho_ij A_ji
  return (matrix_.cwiseProduct(op.matrix().transpose())).sum();
}

// ---------------------------------------------------------------- products

Operator tensor(const Operator& a, const Operator& b) {
  return Operator(a.space().concat(b.space()), kron(a.matrix(), b.matrix()));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  CVector v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  return StateVector(a.space().concat(b.space()), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(a.space().concat(b.space()), kron(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------- ladder operators

Operator annihilation(const ModeSpace& space, std::size_t mode) {
  const int cutoff = space.cutoff(mode);
  Eigen::Index before = 1, after = 1;
  for (std::size_t m = 0; m < mode; ++m) before *= space.cutoffs()[m];
  for (std::size_t m = mode + 1; m < space.modes(); ++m) after *= space.cutoffs()[m];
  CMatrix out = kron(kron(CMatrix::Identity(before, before), ladder(cutoff)), CMatrix::Identity(after, after));
  return Operator(space, std::move(out));
}

Operator creation(const ModeSpace& space, std::size_t mode) { return annihilation(space, mode).adjoint(); }

Operator number(const ModeSpace& space, std::size_t mode) {
  const Operator a = annihilation(space, mode);
  return a.adjoint() * a;
}

// ---------------------------------------------------------------- coherent and cat states

TruncationReport coherent_truncation(Complex alpha, int cutoff) {
  TruncationReport r;
  const double kept = raw_coherent(alpha, cutoff).squaredNorm();
  r.captured_norm = std::sqrt(kept);
  r.tail = std::max(0.0, 1.0 - kept);
  r.warn = r.tail > kTruncationTailWarning;
  return r;
}

StateVector coherent_state(Complex alpha, int cutoff, TruncationReport* report) {
  ModeSpace space = ModeSpace::single(cutoff);
  const CVector c = raw_coherent(alpha, cutoff);
  const TruncationReport r = coherent_truncation(alpha, cutoff);
  merge(report, r);
  return StateVector(std::move(space), c / r.captured_norm);
}

StateVector cat_state(Complex alpha, int cutoff, TruncationReport* report) {
  const StateVector plus = coherent_state(alpha, cutoff, report);
  const StateVector minus = coherent_state(-alpha, cutoff, report);
  return StateVector(plus.space(), plus.amplitudes() + minus.amplitudes()).normalized();
}

StateVector separable_cat(Complex alpha, int cutoff, TruncationReport* report) {
  const StateVector cat = cat_state(alpha, cutoff, report);
  return tensor(cat, cat);
}

StateVector entangled_cat(Complex alpha, int cutoff, TruncationReport* report) {
  const StateVector plus = coherent_state(alpha, cutoff, report);
  const StateVector minus = coherent_state(-alpha, cutoff, report);
  const StateVector a = tensor(plus, minus);
  const StateVector b = tensor(minus, plus);
  return StateVector(a.space(), a.amplitudes() + b.amplitudes()).normalized();
}

Complex coherent_overlap(Complex beta, Complex alpha) {
  return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(beta) * alpha);
}

double cat_norm_correction(Complex alpha) { return 2.0 * std::exp(-2.0 * std::norm(alpha)); }

double separable_cat_norm_correction(Complex alpha) { return 2.0 * std::exp(-2.0 * std::norm(alpha)); }

double entangled_cat_norm_correction(Complex alpha) { return 2.0 * std::exp(-4.0 * std::norm(alpha)); }

// ---------------------------------------------------------------- measures

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_same_space(rho.space(), psi.space(), "fidelity");
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(f.real(), 0.0, 1.0);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep_mode) {
  const ModeSpace& space = rho.space();
  if (space.modes() != 2) throw ArgumentError("partial_trace: two-mode input required");
  const int n0 = space.cutoff(0);
  const int n1 = space.cutoff(1);
  if (keep_mode > 1) throw ArgumentError("partial_trace: keep_mode must be 0 or 1");
  const int kept = keep_mode == 0 ? n0 : n1;
  const int traced = keep_mode == 0 ? n1 : n0;
  CMatrix out = CMatrix::Zero(kept, kept);
  const CMatrix& m = rho.matrix();
  for (int i = 0; i < kept; ++i)
    for (int j = 0; j < kept; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < traced; ++k) {
        if (keep_mode == 0)
          s += m(i * n1 + k, j * n1 + k);
        else
          s += m(k * n1 + i, k * n1 + j);
      }
      out(i, j) = s;
    }
  return DensityMatrix(ModeSpace::single(kept), std::move(out));
}

}  // namespace magcat
