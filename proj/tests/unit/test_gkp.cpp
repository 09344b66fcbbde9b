// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "phonon/errors.hpp"
#include "phonon/gkp.hpp"
#include "phonon/units.hpp"

namespace phonon {
namespace {

using units::kPi;

TEST(Gkp, LatticeShifts) {
  const GkpParams p;
  EXPECT_NEAR(gkp_lattice_alpha(p), std::sqrt(2 * kPi), 1e-12);
  EXPECT_NEAR(std::abs(gkp_x_shift(p)), std::sqrt(2 * kPi) / 2, 1e-12);
  EXPECT_NEAR(std::abs(gkp_z_shift(p)) * gkp_lattice_alpha(p), kPi, 1e-12);
  EXPECT_EQ(gkp_z_shift(p).real(), 0.0);
}

TEST(Gkp, LogicalOperatorsAnticommute) { EXPECT_LT(gkp_anticommutator_defect(GkpParams{}), 1e-10); }

TEST(Gkp, PositionCombPeaks) {
  for (int k : {1, 2}) {
    GkpParams p;
    p.half_width = k;
    p.squeeze = 1.2;
    p.envelope_variance = 40.0;
    p.dim = 120;
    const HybridState s = gkp_prepare(p);
    const Marginal m = gkp_marginal(s, 0, Quadrature::kPosition);
    double area = 0.0;
    for (std::size_t i = 1; i < m.points.size(); ++i) area += m.density[i] * (m.points[i] - m.points[i - 1]);
    EXPECT_NEAR(area, 1.0, 1e-4);
    const std::vector<double> peaks = marginal_peaks(m);
    ASSERT_EQ(peaks.size(), std::size_t(2 * k + 1));
    for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_NEAR(peaks[i] - peaks[i - 1], p.spacing, 0.05);
  }
}

TEST(Gkp, LogicalZImprovesWithSqueezing) {
  double last = -1.0;
  for (double r : {0.4, 0.8, 1.2}) {
    GkpParams p;
    p.squeeze = r;
    p.dim = 120;
    const double z = gkp_logical_expect(gkp_prepare(p), 0, p, Pauli::kZ).real();
    EXPECT_GT(z, last);
    last = z;
  }
  EXPECT_GT(last, 0.5);
}

TEST(Gkp, Validation) {
  GkpParams p;
  p.half_width = -1;
  EXPECT_THROW(validate(p), InvalidArgument);
  p = GkpParams{};
  p.dim = 10;
  EXPECT_THROW(gkp_prepare(p), LeakageError);
}

}  // namespace
}  // namespace phonon
