// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Time propagation on a register.
//
// Static Hamiltonians are split into blocks that do not couple to each other
// (connected components of the nonzero pattern). Blocks up to
// dense_threshold are diagonalized exactly; larger blocks use a scaled Taylor
// series for exp(-iHt)v. Time-dependent segments use a fourth-order commutator-free
// Magnus scheme (two exponentials per step at the Gauss nodes)
// with step doubling.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

struct PropagationOptions {
  double leakage_threshold = kDefaultLeakageThreshold;  // <= 0 disables the guard
  Eigen::Index dense_threshold = 4096;
  double taylor_tolerance = 1e-14;
};

// exp(-i H t)|psi>.
HybridState propagate_static(const OperatorMatrix& h, double t, const HybridState& state,
                             const PropagationOptions& options = {});

// Reusable exp(-i H t) for one static H at any t.
class Propagator {
 public:
  explicit Propagator(const OperatorMatrix& h, const PropagationOptions& options = {});

  HybridState evolve(const HybridState& state, double t) const;
  CVector apply(const CVector& v, double t) const;
  // Full matrix exp(-i H t); intended for small registers.
  CMatrix unitary(double t) const;

  const OperatorMatrix& hamiltonian() const { return h_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  Eigen::Index largest_block() const;

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    bool dense = true;
    Eigen::VectorXd energies;
    CMatrix vectors;
    SparseMatrix sub;  // used when dense == false
  };
  OperatorMatrix h_;
  PropagationOptions options_;
  std::vector<Block> blocks_;
};

// exp(-i t A) v for sparse A by scaled Taylor series; apply(v) must return A v.
CVector expmv_taylor(const std::function<CVector(const CVector&)>& apply, double one_norm, double t,
                     const CVector& v, double tolerance = 1e-14);

// H(t) = static_part + sum_k [ f_k(t) A_k + conj(f_k(t)) A_k^dagger ] for paired terms,
// or f_k(t) A_k (real f, hermitian A) for unpaired terms. t is local to the segment.
struct ModulatedTerm {
  OperatorMatrix op;
  std::function<Complex(double)> envelope;
  bool add_adjoint = true;
};

struct PulseSegment {
  OperatorMatrix static_part;
  std::vector<ModulatedTerm> modulated;
  double duration = 0.0;
  std::string label;

  static PulseSegment constant(OperatorMatrix h, double duration, std::string label = {});
  bool is_static() const { return modulated.empty(); }
  // Instantaneous Hamiltonian (assembled sparse matrix).
  OperatorMatrix hamiltonian_at(double t) const;
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  double total_duration() const;
};

// The time-reversed, sign-flipped sequence implementing U^dagger.
PulseSequence reversed(const PulseSequence& seq);

struct StepControl {
  double tolerance = 1e-10;   // bound on the accumulated Richardson error per segment
  double max_step = 0.0;      // seconds; 0 means the segment length
  double min_step = 0.0;      // seconds; 0 means duration * 1e-12
  bool adaptive = true;       // false: fixed steps of max_step, no error control
  long max_steps = 10'000'000;
};

struct TrajectorySample {
  double time;
  std::vector<Complex> values;
};

struct PulsedResult {
  HybridState state;
  long steps = 0;
  long rejected = 0;
  double error_estimate = 0.0;
  std::vector<TrajectorySample> trajectory;
};

PulsedResult propagate_pulsed(const PulseSequence& seq, const HybridState& state,
                              const StepControl& control = {}, const PropagationOptions& options = {},
                              const std::vector<OperatorMatrix>& observables = {});

// Runs one static Hamiltonian over many initial states; results keep input order.
std::vector<HybridState> propagate_batch(const OperatorMatrix& h, double t,
                                         const std::vector<HybridState>& states,
                                         const PropagationOptions& options = {});

// Uniform blue-sideband drive. The first half ramps Omega(t) = Omega0 [sin(pi t / 2T) + i beta]
// and Delta(t) = Delta0 cos(pi t / 2T) over 0 <= t <= T; in the second half the sine term
// changes sign and the detuning is mirrored, Omega = Omega0 [-sin + i beta], Delta = -Delta0 cos.
// T is the half-sequence duration. Omega0 is the blue-sideband Rabi rate including eta.
struct StaPulseParams {
  double omega0 = 0.0;     // rad/s
  double beta = 0.0;
  double delta0 = 0.0;     // rad/s
  double half_duration = 0.0;  // s
  int mode = 0;
  bool mid_inversion = true;  // false: one plain passage over 2T
};

StaPulseParams default_sta_params(int mode = 0);
PulseSequence uniform_bsb(const ModeRegister& reg, const StaPulseParams& p);

struct ScanPoint {
  double detuning;
  double population_up;
};

// For each detuning d, propagates state under builder(d) for duration and records P_up.
std::vector<ScanPoint> sideband_spectrum_scan(const std::function<OperatorMatrix(double)>& builder,
                                              const std::vector<double>& detunings,
                                              const HybridState& state, double duration,
                                              const PropagationOptions& options = {});

}  // namespace phonon
