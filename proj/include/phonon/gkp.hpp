// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Approximate square-lattice GKP states in one mode.
//
// Position is x = (a + a^dag)/sqrt 2, so D(alpha) with real alpha shifts x by sqrt2 alpha.

#pragma once

#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

struct GkpParams {
  double spacing = 3.5449077018110318;  // l in x units; default 2 sqrt(pi)
  double squeeze = 0.9;                 // r of each comb tooth, squeezing x
  int half_width = 1;                   // K: teeth k = -K..K
  double envelope_variance = 10.0;      // c_k ~ exp(-(k l)^2 / (2 * envelope_variance))
  int dim = 80;
  double leakage_threshold = kDefaultLeakageThreshold;
};

void validate(const GkpParams& p);

// Displacement amplitude of the lattice step, l / sqrt 2.
double gkp_lattice_alpha(const GkpParams& p);
// X_L = D(l/2), Z_L = D(i pi / l), with l in displacement units.
Complex gkp_x_shift(const GkpParams& p);
Complex gkp_z_shift(const GkpParams& p);

// |0>_L = sum_k c_k D(k l) S(r)|0>, normalized, qubit in |down>.
HybridState gkp_prepare(const GkpParams& p);

enum class Pauli { kX, kY, kZ };
// Overlap <psi| P_L |psi> with Y_L = i X_L Z_L. Displacements act in a padded space.
Complex gkp_logical_expect(const HybridState& state, int mode, const GkpParams& p, Pauli which);

// Largest entry of X_L Z_L + Z_L X_L on levels below block, built at dimension work_dim.
double gkp_anticommutator_defect(const GkpParams& p, int block = 20, int work_dim = 200);

enum class Quadrature { kPosition, kMomentum };
struct Marginal {
  std::vector<double> points;
  std::vector<double> density;
};
// |<q|psi>|^2 of the reduced mode density on a uniform grid, from Hermite functions.
Marginal gkp_marginal(const HybridState& state, int mode, Quadrature q, double half_range = 8.0,
                      int samples = 1601);

// Local maxima above threshold * max, as positions.
std::vector<double> marginal_peaks(const Marginal& m, double threshold = 0.05);

}  // namespace phonon
