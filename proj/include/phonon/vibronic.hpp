// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Franck-Condon profiles through the Doktorov decomposition
// U = D(alpha) S^dagger(zeta') R(theta) S(zeta), applied right to left.

#pragma once

#include <cstdint>
#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

// Two modes; frequencies in rad/s. zeta_i = ln(omega_i) / 2 and zeta'_i = ln(omega'_i) / 2 up to a
// common reference that cancels in U, so the net squeeze of an unrotated mode is ln(omega / omega') / 2.
struct DoktorovParams {
  std::vector<double> omega_initial;
  std::vector<double> omega_final;
  std::vector<double> alpha;  // dimensionless displacements
  double theta = 0.0;         // Duschinsky rotation angle between the two modes
};

void validate(const DoktorovParams& p);

// Squeeze parameters (zeta, zeta') relative to the geometric mean of all frequencies.
std::pair<std::vector<double>, std::vector<double>> doktorov_squeezes(const DoktorovParams& p);

// Dense U on a dim x dim product (mode 1 slow). Exact within truncation of each factor.
CMatrix doktorov_unitary(const DoktorovParams& p, int dim);
// The same operator on a qubit register (identity on the qubit).
OperatorMatrix doktorov_build(const DoktorovParams& p, int dim);

struct FcTable {
  int size = 0;         // entries n_1, n_2 < size
  RVector probability;  // row-major, index n_1 * size + n_2
  double total = 0.0;
  double at(int n1, int n2) const { return probability[n1 * size + n2]; }
};

// FC(n) = |<n| U |0>|^2 for n_i <= n_max, built in a space padded by `padding` levels per mode.
// Throws LeakageError if the padded space loses more than leakage_threshold.
FcTable vibronic_fc(const DoktorovParams& p, int n_max, int padding = 20,
                    double leakage_threshold = kDefaultLeakageThreshold);

struct Spectrum {
  std::vector<double> stick_position;   // sum_i n_i omega'_i, in the input frequency unit
  std::vector<double> stick_intensity;
  std::vector<int> stick_n1, stick_n2;
  std::vector<double> grid;
  std::vector<double> trace;            // Gaussian-broadened
};

// Sticks at n_1 w_1 + n_2 w_2 and their Gaussian convolution (fwhm in the same unit) on
// [lo, hi] with the given step. Sticks below min_intensity are dropped from the list.
Spectrum vibronic_spectrum(const FcTable& fc, const std::vector<double>& final_frequencies, double fwhm,
                           double lo, double hi, double step, double min_intensity = 1e-6);

// Weight of the pure progressions and the combination bands.
struct ProgressionWeights {
  double origin = 0.0;        // (0, 0)
  double mode1 = 0.0;         // (n, 0), n >= 1
  double mode2 = 0.0;         // (0, n), n >= 1
  double combination = 0.0;   // both >= 1
};
ProgressionWeights progression_weights(const FcTable& fc);

// Counts of sampled (n_1, n_2) outcomes, row-major like the table.
std::vector<long> vibronic_sample(const FcTable& fc, long shots, std::uint64_t seed);

// SO2 photoelectron parameter sets; frequencies quoted in cm^-1, stored in rad/s.
DoktorovParams so2_to_so2_cation();
DoktorovParams so2_anion_to_so2();

}  // namespace phonon
