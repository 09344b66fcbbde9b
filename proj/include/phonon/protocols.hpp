// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Phonon arithmetic, CBS logic, and NOON interferometry.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

// S+ = sum_n |n+1><n| on one mode (ideal uniform sideband followed by a carrier pi pulse).
// Throws LeakageError when the top level carries more than leakage_threshold.
HybridState phonon_add(const HybridState& state, int mode,
                       double leakage_threshold = kDefaultLeakageThreshold);

struct SubtractResult {
  bool success = false;
  double success_probability = 0.0;  // 1 - P(n = 0)
  std::optional<HybridState> state;  // S- applied and renormalized, on success
};

// S- = sum_n |n-1><n|, conditioned on a dark readout. The vacuum component ends bright and
// is discarded; rng decides the outcome.
SubtractResult phonon_subtract(const HybridState& state, int mode, Rng& rng);
// Same, returning the post-selected branch without sampling (success iff non-vacuum support).
SubtractResult phonon_subtract_conditioned(const HybridState& state, int mode);

// Fredkin table on qubit x two modes limited to {0, 1}: row = input, column = output,
// index = qubit * 4 + n * 2 + m. One CBS pulse at tau = pi / (2 xi).
struct TruthTable {
  Eigen::Matrix<double, 8, 8> probabilities;
  Eigen::Matrix<double, 8, 8> expected;  // the permutation
  double max_deviation = 0.0;
  double min_success = 0.0;  // smallest probability on the expected output
};

// shots = 0 gives exact probabilities; otherwise each row is sampled with trajectory_rng(seed, row).
TruthTable fredkin_truth_table(double xi = 1.0, int dim = 5, long shots = 0, std::uint64_t seed = 0);

// Largest deviation of U_CBS^{ij, pi/2} (U_CBS^{ic, 0})^2 from the ideal controlled swap
// on inputs |q, n, m, 0_c> with n + m <= max_total < dim; dims are (2, dim, dim, dim).
// The beam splitter is exact only on blocks whose total fits the truncation.
double cswap_defect(int dim, int max_total);

// (|N, 0> + e^{i N phi_s} |0, N>) / sqrt 2 with the qubit in |down>.
HybridState noon_state(const ModeRegister& reg, int n, int mode_1, int mode_2, double phi_s = 0.0);

// Parity of mode_1 after exp[(pi/4)(a1 a2^dag e^{-i phi} - a1^dag a2 e^{i phi})].
std::vector<double> noon_parity_fringe(const HybridState& state, int mode_1, int mode_2,
                                       const std::vector<double>& phis);

// y = A cos(k phi) + B sin(k phi) + C. contrast = sqrt(A^2 + B^2).
struct FringeFit {
  double k = 0.0;
  double contrast = 0.0;
  double phase = 0.0;   // atan2(-B, A)
  double offset = 0.0;
  double rms_residual = 0.0;
};

// Linear least squares on a k grid over (0, k_max], refined by Brent minimization.
FringeFit fit_fringe(const std::vector<double>& phis, const std::vector<double>& values,
                     double k_max = 10.0);

// 4 Var(G) for a pure state.
double qfi(const HybridState& state, const OperatorMatrix& generator);
// (N_1 - N_2) / 2.
OperatorMatrix half_number_difference(const ModeRegister& reg, int mode_1, int mode_2);

}  // namespace phonon
