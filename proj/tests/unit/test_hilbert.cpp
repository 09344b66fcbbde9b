// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "phonon/errors.hpp"
#include "phonon/hilbert.hpp"

namespace phonon {
namespace {

TEST(ModeLadder, RaiseEntries) {
  const Ladder l2 = mode_ladder(2);
  EXPECT_EQ(l2.raise(1, 0), Complex(1.0));
  EXPECT_EQ(l2.raise.cwiseAbs().sum(), 1.0);
  const Ladder l4 = mode_ladder(4);
  EXPECT_NEAR(l4.raise(3, 2).real(), 1.7320508075688772, 1e-15);
  EXPECT_TRUE(l4.lower.isApprox(l4.raise.adjoint()));
}

TEST(ModeLadder, Parity) {
  const Ladder l = mode_ladder(3);
  EXPECT_EQ(l.parity(0, 0), Complex(1.0));
  EXPECT_EQ(l.parity(1, 1), Complex(-1.0));
  EXPECT_EQ(l.parity(2, 2), Complex(1.0));
}

TEST(ModeLadder, CommutatorBelowTop) {
  // [a, a^dag] = 1 except the top diagonal entry, which is 1 - dim.
  const int d = 6;
  const Ladder l = mode_ladder(d);
  const CMatrix c = l.lower * l.raise - l.raise * l.lower;
  EXPECT_LT((c.topLeftCorner(d - 1, d - 1) - CMatrix::Identity(d - 1, d - 1)).norm(), 1e-12);
  EXPECT_NEAR(c(d - 1, d - 1).real(), 1.0 - d, 1e-12);
}

TEST(ModeLadder, RejectsTinyDimension) { EXPECT_THROW(mode_ladder(1), InvalidArgument); }

TEST(Embed, QubitSigmaZOrdering) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  const CMatrix z = embed(qubit_ops::sigma_z(), Slot::qubit(), reg).dense();
  // Qubit digit is slowest: indices 0..2 are |down>, 3..5 are |up>.
  for (int i = 0; i < 3; ++i) EXPECT_EQ(z(i, i), Complex(-1.0));
  for (int i = 3; i < 6; ++i) EXPECT_EQ(z(i, i), Complex(1.0));
}

TEST(Embed, IdentityAndNumber) {
  const ModeRegister reg = ModeRegister::with_dims({2, 3});
  const CMatrix id = embed(CMatrix::Identity(3, 3), Slot::of_mode(1), reg).dense();
  EXPECT_TRUE(id.isApprox(CMatrix::Identity(reg.dimension(), reg.dimension())));
  EXPECT_NEAR(expectation(fock(reg, 0, {0, 2}), number_op(reg, 1)).real(), 2.0, 1e-15);
}

TEST(Embed, DisjointSlotsCommute) {
  const ModeRegister reg = ModeRegister::with_dims({3, 4});
  const OperatorMatrix a = lower_op(reg, 0);
  const OperatorMatrix b = raise_op(reg, 1) + embed(qubit_ops::sigma_x(), Slot::qubit(), reg);
  EXPECT_LT(commutator(a, b).dense().norm(), 1e-12);
}

TEST(Embed, RejectsBadSlot) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  EXPECT_THROW(embed(CMatrix::Identity(3, 3), Slot::of_mode(2), reg), InvalidArgument);
  EXPECT_THROW(embed(CMatrix::Identity(4, 4), Slot::of_mode(0), reg), InvalidArgument);
}

TEST(Register, IndexRoundTrip) {
  const ModeRegister reg = ModeRegister::with_dims({3, 2, 4});
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    EXPECT_EQ(reg.index(reg.qubit_of(i), reg.occupations_of(i)), i);
  }
}

TEST(Register, LambDickeWarning) {
  const ModeRegister reg(QubitSpec{}, {ModeSpec{1.0, 0.03, 5}, ModeSpec{1.0, 0.03, 6}});
  EXPECT_EQ(reg.lamb_dicke_warnings(), std::vector<int>{1});
}

TEST(States, CoherentPoisson) {
  const ModeRegister reg = ModeRegister::with_dims({20});
  const RVector p = phonon_distribution(coherent(reg, {Complex(1.0, 0.0)}), 0);
  // Oracle: Poisson weights e^{-1} / n!.
  double fact = 1.0;
  for (int n = 0; n < 12; ++n) {
    if (n > 0) fact *= n;
    EXPECT_NEAR(p[n], std::exp(-1.0) / fact, 1e-12);
  }
  EXPECT_NEAR(p[0], 0.36787944117144233, 1e-12);
}

TEST(States, CoherentZeroIsVacuum) {
  const ModeRegister reg = ModeRegister::with_dims({6});
  EXPECT_NEAR(fidelity(coherent(reg, {Complex(0.0)}), vacuum(reg)), 1.0, 1e-15);
}

TEST(States, SqueezedVacuum) {
  const ModeRegister reg = ModeRegister::with_dims({40});
  const RVector p = phonon_distribution(squeezed(reg, {0.5}), 0);
  EXPECT_NEAR(p[0], 1.0 / std::cosh(0.5), 1e-12);
  for (int n = 1; n < 40; n += 2) EXPECT_LT(p[n], 1e-20);
}

TEST(States, NormalizedAndGuarded) {
  const ModeRegister reg = ModeRegister::with_dims({12, 12});
  EXPECT_NEAR(coherent(reg, {Complex(0.3, 0.1), Complex(-0.2)}).norm(), 1.0, 1e-12);
  EXPECT_THROW(fock(reg, 0, {12, 0}), InvalidArgument);
  EXPECT_THROW(coherent(reg, {Complex(2.5), Complex(0.0)}), LeakageError);
}

TEST(States, ThermalSamplingMean) {
  Rng rng(3);
  double sum = 0.0;
  const int shots = 20000;
  for (int i = 0; i < shots; ++i) sum += sample_thermal_occupation(1.5, 60, rng);
  EXPECT_NEAR(sum / shots, 1.5, 5.0 * std::sqrt(1.5 * 2.5 / shots));
}

TEST(Observables, FidelityAndParity) {
  const ModeRegister reg = ModeRegister::with_dims({4});
  const HybridState f2 = fock(reg, 0, {2});
  EXPECT_NEAR(fidelity(f2, f2), 1.0, 1e-15);
  EXPECT_NEAR(expectation(f2, parity_op(reg, 0)).real(), 1.0, 1e-15);
}

TEST(Observables, HermitianExpectationIsReal) {
  const ModeRegister reg = ModeRegister::with_dims({16});
  const HybridState s = coherent(reg, {Complex(0.4, 0.7)});
  const OperatorMatrix x = lower_op(reg, 0) + raise_op(reg, 0);
  EXPECT_LT(std::abs(expectation(s, x).imag()), 1e-10);
}

TEST(Leakage, Values) {
  const ModeRegister reg = ModeRegister::with_dims({20});
  EXPECT_EQ(leakage(vacuum(reg)), 0.0);
  EXPECT_NEAR(leakage(fock(reg, 0, {19})), 1.0, 1e-15);
  EXPECT_LT(leakage(coherent(reg, {Complex(1.0)})), 1e-12);
}

TEST(OperatorMatrix, HermitianFlagChecked) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  EXPECT_THROW(OperatorMatrix(reg, lower_op(reg, 0).matrix(), true), InvalidArgument);
}

}  // namespace
}  // namespace phonon
