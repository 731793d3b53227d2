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

#include <cmath>

#include <gtest/gtest.h>

#include "magcat/error.hpp"
#include "magcat/hilbert.hpp"
#include "oracles.hpp"

using namespace magcat;

namespace {

const Complex kI(0.0, 1.0);

}  // namespace

TEST(ModeSpace, FlattensWithModeZeroMostSignificant) {
  const ModeSpace s = ModeSpace::pair(4);
  EXPECT_EQ(s.dim(), 16);
  const int occ[] = {2, 3};
  const StateVector v = StateVector::fock(s, occ);
  EXPECT_EQ(v.amplitudes()(2 * 4 + 3), Complex(1.0));
}

TEST(ModeSpace, RejectsTinyCutoff) { EXPECT_THROW(ModeSpace::single(0), ArgumentError); }

TEST(Ladder, MatrixElementsAreSqrtN) {
  const ModeSpace s = ModeSpace::single(6);
  const Operator a = annihilation(s, 0);
  for (int n = 1; n < 6; ++n) EXPECT_DOUBLE_EQ(a.matrix()(n - 1, n).real(), std::sqrt(n));
  const Operator num = number(s, 0);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(num.matrix()(n, n).real(), n, 1e-14);
  EXPECT_TRUE((creation(s, 0) * a - num).matrix().isZero(1e-14));
}

TEST(Ladder, CommutatorIsIdentityAwayFromCutoff) {
  const int n = 8;
  const ModeSpace s = ModeSpace::single(n);
  const CMatrix c = (annihilation(s, 0) * creation(s, 0) - creation(s, 0) * annihilation(s, 0)).matrix();
  for (int k = 0; k < n - 1; ++k) EXPECT_NEAR(c(k, k).real(), 1.0, 1e-14);
  EXPECT_NEAR(c(n - 1, n - 1).real(), -(n - 1), 1e-12);
}

TEST(Ladder, TwoModeOperatorsMatchKronecker) {
  const int n = 4;
  const ModeSpace s = ModeSpace::pair(n);
  EXPECT_TRUE(annihilation(s, 0).matrix().isApprox(oracle::annihilator(n, 0)));
  EXPECT_TRUE(annihilation(s, 1).matrix().isApprox(oracle::annihilator(n, 1)));
}

TEST(Coherent, MatchesClosedFormAmplitudes) {
  for (Complex a : {Complex(0.5), Complex(1.0, -0.3), 1.4 * kI, Complex(-2.0)}) {
    const StateVector v = coherent_state(a, 40);
    const Eigen::VectorXcd ref = oracle::coherent(a, 40);
    EXPECT_LT((v.amplitudes() - ref / ref.norm()).cwiseAbs().maxCoeff(), 1e-13) << a;
  }
}

TEST(Coherent, IsNormalizedAfterTruncation) {
  EXPECT_NEAR(coherent_state(Complex(2.5), 15).norm(), 1.0, 1e-14);
}

TEST(Coherent, TruncationReportFlagsHeavyTail) {
  const TruncationReport small = coherent_truncation(1.4 * kI, 15);
  EXPECT_FALSE(small.warn);
  EXPECT_LT(small.tail, 1e-8);
  const TruncationReport big = coherent_truncation(Complex(3.0), 15);
  EXPECT_TRUE(big.warn);
  EXPECT_GT(big.tail, kTruncationTailWarning);
}

TEST(Coherent, ZeroAmplitudeIsVacuum) {
  const StateVector v = coherent_state(Complex(0.0), 5);
  EXPECT_NEAR(std::abs(v.amplitudes()(0)), 1.0, 1e-15);
  EXPECT_NEAR(v.amplitudes().tail(4).norm(), 0.0, 1e-15);
}

TEST(Coherent, OverlapClosedForm) {
  for (Complex a : {Complex(0.5), 1.4 * kI, Complex(0.3, 0.8)}) {
    const Complex b(0.2, -0.4);
    const Complex numeric = coherent_state(b, 60).inner(coherent_state(a, 60));
    EXPECT_NEAR(std::abs(coherent_overlap(b, a) - numeric), 0.0, 1e-13);
  }
}

TEST(Cat, EvenParityAndNormalized) {
  const StateVector cat = cat_state(1.4 * kI, 15);
  EXPECT_NEAR(cat.norm(), 1.0, 1e-14);
  for (int n = 1; n < 15; n += 2) EXPECT_EQ(cat.amplitudes()(n), Complex(0.0));
}

TEST(Cat, NormCorrectionsMatchInnerProducts) {
  // <psi|psi> of the unnormalized superpositions equals 2 + eps.
  for (Complex a : {Complex(0.5), Complex(1.0), 1.4 * kI, Complex(2.0)}) {
    const Eigen::VectorXcd p = oracle::coherent(a, 80), m = oracle::coherent(-a, 80);
    EXPECT_NEAR((p + m).squaredNorm() - 2.0, cat_norm_correction(a), 1e-12);
    EXPECT_NEAR(separable_cat_norm_correction(a), cat_norm_correction(a), 0.0);
    Eigen::VectorXcd ent = Eigen::VectorXcd::Zero(80 * 80);
    for (int i = 0; i < 80; ++i)
      for (int j = 0; j < 80; ++j) ent(i * 80 + j) = p(i) * m(j) + m(i) * p(j);
    EXPECT_NEAR(ent.squaredNorm() - 2.0, entangled_cat_norm_correction(a), 1e-12);
  }
}

TEST(Cat, EntangledIsSymmetricAndNormalized) {
  const int n = 10;
  const StateVector e = entangled_cat(Complex(0.0, 1.0), n);
  EXPECT_NEAR(e.norm(), 1.0, 1e-14);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) EXPECT_NEAR(std::abs(e.amplitudes()(i * n + j) - e.amplitudes()(j * n + i)), 0, 1e-15);
}

TEST(Cat, SeparableIsProductOfCats) {
  const StateVector s = separable_cat(Complex(1.0), 8);
  const StateVector c = cat_state(Complex(1.0), 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      EXPECT_NEAR(std::abs(s.amplitudes()(i * 8 + j) - c.amplitudes()(i) * c.amplitudes()(j)), 0.0, 1e-15);
}

TEST(DensityMatrix, PureStateInvariants) {
  const DensityMatrix rho = DensityMatrix::pure(cat_state(Complex(1.2), 12));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-13);
  EXPECT_LT(rho.hermiticity_defect(), 1e-15);
  EXPECT_NO_THROW(rho.validate());
}

TEST(DensityMatrix, ValidateRejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(ModeSpace::single(2), m).validate(), NumericsError);
}

TEST(DensityMatrix, MixtureOfCoherentStatesHasHalfPurityForLargeAlpha) {
  const Complex a(0.0, 2.0);
  const double w[] = {0.5, 0.5};
  const StateVector s[] = {coherent_state(a, 30), coherent_state(-a, 30)};
  const DensityMatrix rho = DensityMatrix::mixture(w, s);
  EXPECT_NEAR(rho.purity(), 0.5 + 0.5 * std::exp(-4.0 * std::norm(a)), 1e-10);
}

TEST(Fidelity, OfStateWithItselfIsOne) {
  const StateVector e = entangled_cat(1.4 * kI, 8);
  EXPECT_NEAR(fidelity(DensityMatrix::pure(e), e), 1.0, 1e-14);
}

TEST(PartialTrace, OfProductGivesFactor) {
  const StateVector a = coherent_state(Complex(0.7), 6), b = cat_state(Complex(0.0, 1.1), 6);
  const DensityMatrix rho = DensityMatrix::pure(tensor(a, b));
  EXPECT_TRUE(partial_trace(rho, 0).matrix().isApprox(DensityMatrix::pure(a).matrix(), 1e-13));
  EXPECT_TRUE(partial_trace(rho, 1).matrix().isApprox(DensityMatrix::pure(b).matrix(), 1e-13));
}

TEST(PartialTrace, OfEntangledCatIsNearlyMixed) {
  const Complex a(0.0, 1.4);
  const DensityMatrix r = partial_trace(DensityMatrix::pure(entangled_cat(a, 15)), 0);
  // (|a><a| + |-a><-a| + cross terms ~ e^{-2|a|^2}) / 2
  EXPECT_NEAR(r.purity(), 0.5, 0.01);
  EXPECT_NEAR(r.trace(), 1.0, 1e-13);
}
