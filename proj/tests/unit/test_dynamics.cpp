// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "phonon/dynamics.hpp"
#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/units.hpp"

namespace phonon {
namespace {

using units::kPi;

double distance(const HybridState& a, const HybridState& b) { return (a.amplitudes() - b.amplitudes()).norm(); }

HybridState mixed_input(const ModeRegister& reg) {
  CVector v(reg.dimension());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(std::cos(0.7 * i), std::sin(1.3 * i)) / double(i + 1);
  // Keep the top levels empty so the leakage guard stays quiet.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    for (int m = 0; m < reg.num_modes(); ++m) {
      if (reg.occupation_of(i, m) >= reg.mode_dim(m) - 2) v[i] = 0.0;
    }
  }
  return HybridState(reg, v);
}

TEST(Propagator, UnitaryAndBlocks) {
  const ModeRegister reg = ModeRegister::with_dims({5, 5});
  const OperatorMatrix h = mode_rotation(reg, 0.8, 0.2, 0, 1) + carrier(reg, {0.0, 0.0, 0.3});
  const Propagator prop(h);
  const CMatrix u = prop.unitary(1.7);
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm(), 1e-12);
  // Both qubit levels times the nine excitation-number sectors.
  EXPECT_EQ(prop.num_blocks(), 18u);
}

TEST(Propagator, TaylorMatchesDense) {
  const ModeRegister reg = ModeRegister::with_dims({6, 6});
  const OperatorMatrix h = lamb_dicke_composite(reg, 0, {1.0, 0.3, 0.2}) + mode_rotation(reg, 0.5, 0.0, 0, 1);
  const HybridState in = mixed_input(reg);
  PropagationOptions sparse;
  sparse.dense_threshold = 1;
  sparse.leakage_threshold = 0.0;
  PropagationOptions dense;
  dense.leakage_threshold = 0.0;
  EXPECT_LT(distance(propagate_static(h, 2.3, in, sparse), propagate_static(h, 2.3, in, dense)), 1e-11);
}

TEST(Propagator, GroupProperty) {
  const ModeRegister reg = ModeRegister::with_dims({6});
  const OperatorMatrix h = lamb_dicke_composite(reg, 0, {1.0, 0.0, 0.4});
  const Propagator prop(h, {0.0, 4096, 1e-14});
  const HybridState in = mixed_input(reg);
  EXPECT_LT(distance(prop.evolve(prop.evolve(in, 0.4), 0.9), prop.evolve(in, 1.3)), 1e-12);
  EXPECT_LT(distance(prop.evolve(prop.evolve(in, 0.8), -0.8), in), 1e-12);
}

TEST(Pulsed, ConstantSegmentMatchesStatic) {
  const ModeRegister reg = ModeRegister::with_dims({5});
  const OperatorMatrix h = sideband(reg, SidebandKind::kRed, 1, 0, {3.0, 0.1, 0.5});
  const HybridState in = fock(reg, 0, {2});
  PulseSequence seq;
  seq.segments.push_back(PulseSegment::constant(h, 1.1));
  EXPECT_LT(distance(propagate_pulsed(seq, in).state, propagate_static(h, 1.1, in)), 1e-12);
}

TEST(Pulsed, AreaTheorem) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  const OperatorMatrix half_sp = embed(qubit_ops::sigma_plus(), Slot::qubit(), reg) * 0.5;
  const double duration = 2.0;
  for (double area : {kPi / 2, kPi, 3 * kPi / 2}) {
    // Omega(t) = A (pi / 2T) sin(pi t / T) has area A.
    PulseSegment seg{OperatorMatrix::zero(reg), {}, duration, "shaped"};
    seg.modulated.push_back({half_sp, [=](double t) {
                               return Complex(area * kPi / (2 * duration) * std::sin(kPi * t / duration));
                             }});
    const PulsedResult r = propagate_pulsed({{seg}}, vacuum(reg));
    EXPECT_NEAR(population_up(r.state), std::pow(std::sin(area / 2), 2), 1e-9);
  }
}

TEST(Pulsed, StepHalvingConverges) {
  const ModeRegister reg = ModeRegister::with_dims({6});
  const StaPulseParams p{units::khz_to_rad(10.0), 0.1, units::khz_to_rad(5.0), 200e-6, 0, true};
  const PulseSequence seq = uniform_bsb(reg, p);
  const HybridState in = fock(reg, 0, {1});
  StepControl coarse;
  coarse.adaptive = false;
  coarse.max_step = 2e-6;
  StepControl fine = coarse;
  fine.max_step = 1e-6;
  const double d = distance(propagate_pulsed(seq, in, coarse).state, propagate_pulsed(seq, in, fine).state);
  EXPECT_LT(d, 1e-8);
  EXPECT_GT(d, 0.0);
}

TEST(Pulsed, ReversedUndoes) {
  const ModeRegister reg = ModeRegister::with_dims({6});
  const StaPulseParams p{units::khz_to_rad(10.0), 0.2, units::khz_to_rad(8.0), 150e-6, 0, true};
  const PulseSequence seq = uniform_bsb(reg, p);
  const HybridState in = fock(reg, 0, {2});
  const HybridState forward = propagate_pulsed(seq, in).state;
  EXPECT_LT(distance(propagate_pulsed(reversed(seq), forward).state, in), 1e-8);
}

TEST(Pulsed, SpinEcho) {
  // A static qubit detuning is refocused by a pi pulse midway.
  const ModeRegister reg = ModeRegister::with_dims({3});
  const OperatorMatrix free = carrier(reg, {0.0, 0.0, 1.7});
  const double rabi = 100.0;
  PulseSequence seq;
  seq.segments.push_back(PulseSegment::constant(carrier(reg, {rabi, 0.0, 0.0}), kPi / (2 * rabi)));
  seq.segments.push_back(PulseSegment::constant(free, 0.8));
  seq.segments.push_back(PulseSegment::constant(carrier(reg, {rabi, 0.0, 0.0}), kPi / rabi));
  seq.segments.push_back(PulseSegment::constant(free, 0.8));
  seq.segments.push_back(PulseSegment::constant(carrier(reg, {rabi, 0.0, 0.0}), kPi / (2 * rabi)));
  EXPECT_NEAR(population_up(propagate_pulsed(seq, vacuum(reg)).state), 0.0, 1e-12);
  EXPECT_NEAR(seq.total_duration(), 1.6 + 2 * kPi / rabi, 1e-15);
}

TEST(Pulsed, TrajectoryRecordsObservables) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  PulseSequence seq;
  seq.segments.push_back(PulseSegment::constant(carrier(reg, {1.0, 0.0, 0.0}), 1.0));
  const PulsedResult r = propagate_pulsed(seq, vacuum(reg), {}, {}, {embed(qubit_ops::projector_up(), Slot::qubit(), reg)});
  ASSERT_FALSE(r.trajectory.empty());
  EXPECT_NEAR(r.trajectory.back().time, 1.0, 1e-15);
  EXPECT_NEAR(r.trajectory.back().values.at(0).real(), std::pow(std::sin(0.5), 2), 1e-10);
}

TEST(Batch, MatchesIndividual) {
  const ModeRegister reg = ModeRegister::with_dims({12});
  const OperatorMatrix h = sideband(reg, SidebandKind::kBlue, 1, 0, {4.0, 0.0, 0.0});
  std::vector<HybridState> in;
  for (int n = 0; n < 4; ++n) in.push_back(fock(reg, 0, {n}));
  const std::vector<HybridState> out = propagate_batch(h, 0.9, in);
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t k = 0; k < in.size(); ++k) EXPECT_LT(distance(out[k], propagate_static(h, 0.9, in[k])), 1e-14);
}

TEST(Scan, CarrierLineCenter) {
  const ModeRegister reg = ModeRegister::with_dims({3});
  const double rabi = 1.0;
  std::vector<double> detunings;
  for (int k = -20; k <= 20; ++k) detunings.push_back(0.25 * k);
  const auto scan = sideband_spectrum_scan([&](double d) { return carrier(reg, {rabi, 0.0, d}); }, detunings,
                                           vacuum(reg), kPi / rabi);
  ASSERT_EQ(scan.size(), detunings.size());
  for (const ScanPoint& p : scan) {
    const double w = std::hypot(rabi, p.detuning);
    EXPECT_NEAR(p.population_up, std::pow(rabi / w * std::sin(w * kPi / (2 * rabi)), 2), 1e-12);
  }
}

TEST(Guards, LeakageRaised) {
  const ModeRegister reg = ModeRegister::with_dims({4});
  const OperatorMatrix h = sideband(reg, SidebandKind::kBlue, 1, 0, {10.0, 0.0, 0.0});
  EXPECT_THROW(propagate_static(h, kPi / (0.1 * 10.0), fock(reg, 0, {1})), LeakageError);
}

}  // namespace
}  // namespace phonon
