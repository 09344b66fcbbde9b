// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Simulated readout: qubit fluorescence, blue-sideband population analysis,
// repeated-subtraction phonon counting, and phase-space reconstruction.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phonon/dynamics.hpp"
#include "phonon/hilbert.hpp"

namespace phonon {

// P_up(t) = 1/2 sum_n P_n [1 - exp(-gamma_n t) A cos(2 Omega_{n,n+1} t)],
// gamma_n = gamma0 (n+1)^gamma_exponent, Omega_{n,n+1} = sqrt(n+1) rabi.
struct SignalModel {
  double gamma0 = 0.0;           // 1/s
  double gamma_exponent = 0.7;
  double contrast = 1.0;         // A
};

void validate(const SignalModel& model);

RVector bsb_signal(const RVector& populations, const RVector& times, double rabi,
                   const SignalModel& model = {});

struct InversionResult {
  RVector populations;  // n = 0..n_max
  double residual = 0.0;
  double condition = 0.0;  // of the design matrix
};

// Nonnegative least squares on the known frequency ladder with sum P_n <= 1.
// Throws InvalidArgument when the design is ill conditioned or under-sampled.
InversionResult invert_populations(const RVector& signal, const RVector& times, double rabi,
                                   const SignalModel& model, int n_max);

// Each entry replaced by a binomial estimate from the given number of shots.
RVector add_shot_noise(const RVector& probabilities, int shots, Rng& rng);

struct QubitReadout {
  int bit = 0;  // 1 = bright
  HybridState state;
  bool motion_destroyed = false;  // bright outcomes scatter photons
};

// Bright with probability contrast * P_up. A dark outcome keeps the missed |up> branch with
// weight (1 - contrast) P_up and collapses onto one of the two branches.
QubitReadout qubit_readout(const HybridState& state, Rng& rng, double contrast = 1.0);

struct MeasurementRecord {
  int qubit_bit = 0;
  std::vector<int> phonon_counts;   // -1 when the repetition cap was hit
  std::vector<int> repetitions_used;
  std::uint64_t rng_seed = 0;
  bool truncated = false;
  bool motion_destroyed = false;
};

// One repetition of the subtraction readout on one mode: carrier pi, then the inverse
// blue-sideband transfer |up, n+1> -> |down, n>. |up, 0> is left bright.
class PhononCounter {
 public:
  // Exact two-level maps for each sideband pair.
  static PhononCounter ideal(const ModeRegister& reg, int mode);
  // Inverse of the simulated uniform blue-sideband sequence.
  static PhononCounter simulated(const ModeRegister& reg, int mode, const StaPulseParams& params,
                                 const StepControl& control = {});

  const CMatrix& repetition() const { return repetition_; }
  int mode() const { return mode_; }
  const ModeRegister& reg() const { return reg_; }

 private:
  PhononCounter(ModeRegister reg, int mode, CMatrix repetition)
      : reg_(std::move(reg)), mode_(mode), repetition_(std::move(repetition)) {}
  ModeRegister reg_;
  int mode_;
  CMatrix repetition_;
};

struct PhononReadout {
  MeasurementRecord record;
  // Input state projected onto the measured Fock level of the mode (absent on truncation).
  std::optional<HybridState> collapsed;
};

// Repeats [carrier pi, inverse sideband, qubit readout] until the first bright outcome;
// n = repetitions - 1. The qubit of the input is expected in |down>.
PhononReadout projective_phonon_readout(const HybridState& state, const PhononCounter& counter,
                                        std::uint64_t seed, int max_reps, double contrast = 1.0);

// Sequential single-mode readouts on the collapsed state, one counter per mode.
PhononReadout sequential_phonon_readout(const HybridState& state,
                                        const std::vector<PhononCounter>& counters,
                                        std::uint64_t seed, int max_reps, double contrast = 1.0);

// Histogram of counts over shots; shot i uses trajectory_rng(seed, i). The last entry
// counts truncated shots.
std::vector<long> phonon_histogram(const HybridState& state, const PhononCounter& counter,
                                   long shots, std::uint64_t seed, int max_reps,
                                   double contrast = 1.0);

enum class WignerMethod { kParity, kCbsAncilla };

struct PhaseSpaceGrid {
  std::vector<Complex> points;
  std::vector<double> values;
  std::string quantity;  // "Q" or "W"
  int working_dim = 0;   // truncation used for the displacements
};

// Q(alpha) = <alpha| rho |alpha> / pi from analytic coherent amplitudes.
PhaseSpaceGrid q_function(const HybridState& state, int mode, const std::vector<Complex>& points);

// W(alpha) = (2/pi) Tr[Pi D(-alpha) rho D(alpha)]. The mode is padded until the displaced
// population in the top two levels is below leakage_threshold; LeakageError if max_dim is hit.
PhaseSpaceGrid wigner(const HybridState& state, int mode, const std::vector<Complex>& points,
                      WignerMethod method = WignerMethod::kParity,
                      double leakage_threshold = kDefaultLeakageThreshold, int max_dim = 160);

// Parity of a mode state measured through a qubit and vacuum ancilla:
// carrier pi/2, (CBS at tau = pi / 2 xi, upsilon = 0)^2, carrier pi/2 with phase pi.
// Returns P_down - P_up.
double cbs_ancilla_parity(const CVector& mode_state);

// Fock populations n = 0..n_meas-1 of D(alpha) rho D(alpha)^dagger for each alpha.
std::vector<RVector> displaced_populations(const CMatrix& rho, const std::vector<Complex>& alphas,
                                           int n_meas, int pad = 40);

// alphas[k] = amplitude exp(2 pi i k / count).
std::vector<Complex> ring_displacements(int count, double amplitude);

struct DensityReconstruction {
  CMatrix rho;
  int iterations = 0;
  double last_change = 0.0;  // trace distance of the final update
  bool converged = false;
};

// Iterative maximum likelihood (R rho R with G^{-1/2} normalization) for the POVM
// E_{k,n} = D(alpha_k)^dagger |n><n| D(alpha_k) projected onto dimension dim.
// Zero iterations return the maximally mixed start.
DensityReconstruction reconstruct_density(const std::vector<RVector>& measured,
                                          const std::vector<Complex>& alphas, int dim,
                                          int max_iterations = 20000, double tolerance = 1e-8,
                                          int pad = 40);

double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace phonon
