// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Quantum work statistics of a dragged oscillator and the three-mode absorption refrigerator.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

// H(t)/hbar = omega a^dag a + g(t)(a + a^dag), g = f x0 / hbar, x0 = sqrt(hbar / 2 M omega).
// The force ramps linearly from 0 to f_max over tau.
enum class WorkProtocol { kSudden, kRamp, kAdiabatic };

struct ThermoParams {
  double mass = 0.0;         // kg
  double omega = 0.0;        // rad/s
  double force_max = 0.0;    // N
  double temperature = 0.0;  // K
  WorkProtocol protocol = WorkProtocol::kRamp;
  double tau = 0.0;          // s, ramp duration
  long trials = 100000;
  int dim = 64;
  double leakage_threshold = kDefaultLeakageThreshold;
};

void validate(const ThermoParams& p);

// Force that displaces the ground state by |alpha0|: f = |alpha0| hbar omega / x0.
double force_for_displacement(double mass, double omega, double alpha0);
// Delta F = -f_max^2 / (2 M omega^2), J.
double free_energy_change(const ThermoParams& p);
// beta = 1 / (k_B T), 1/J.
double inverse_temperature(const ThermoParams& p);

// P(m | n): initial Fock n of H(0) to final displaced level m of H(tau), n, m < dim.
Eigen::MatrixXd work_transition_matrix(const ThermoParams& p);

struct JarzynskiResult {
  std::vector<double> work;    // J, one per trial
  double estimator = 0.0;      // <exp(-beta W)>
  double dissipated = 0.0;     // <exp(-beta (W - Delta F))>
  double minus_log = 0.0;      // -ln <exp(-beta (W - Delta F))>
  double standard_error = 0.0; // of minus_log, by the delta method
  double exact = 0.0;          // the thermal average of exp(-beta (W - Delta F)) from P(m|n)
  double beta_delta_f = 0.0;
  double delta_f = 0.0;        // J
  double thermal_tail = 0.0;   // Boltzmann weight beyond dim
};

// Two-point measurement per trial; trial i uses trajectory_rng(seed, i).
JarzynskiResult jarzynski_run(const ThermoParams& p, std::uint64_t seed);

enum class WorkModeState { kThermal, kSqueezed };

struct FridgeConfig {
  double xi = 1.0;                 // rad/s
  double detuning = 0.0;           // rad/s
  double nbar_h = 0.0;
  double nbar_w = 0.0;
  double nbar_c = 0.0;
  WorkModeState work_state = WorkModeState::kThermal;  // squeezed vacuum has mean nbar_w
  double t_max = 0.0;              // s
  int samples = 401;               // time points on [0, t_max]
  long trajectories = 2000;
  int sample_dim = 60;             // thermal sampling cutoff per mode
};

void validate(const FridgeConfig& c);

struct FridgeResult {
  std::vector<double> times;
  // Exact averages over the initial product distribution.
  std::vector<double> n_h, n_w, n_c;
  // Averages over sampled trajectories.
  std::vector<double> traj_n_h, traj_n_w, traj_n_c;
  double initial_n_c = 0.0;
  double time_average_n_c = 0.0;       // exact, over the grid
  double infinite_time_n_c = 0.0;      // exact dephased average
  double traj_time_average_n_c = 0.0;
  double min_n_c = 0.0;                // exact, over the grid
  double t_min = 0.0;
  double truncated_weight = 0.0;       // initial weight beyond sample_dim
  // Blocks fix N_h + N_w and N_h + N_c by construction; this is the largest norm drift.
  double norm_defect = 0.0;
  bool refrigeration_condition = false;
};

// The dynamics splits into blocks of fixed (N_h + N_w, N_h + N_c); each Fock input is
// propagated exactly inside its block. Trajectory i uses trajectory_rng(seed, i).
FridgeResult fridge_run(const FridgeConfig& c, std::uint64_t seed);

// Occupation distribution of the work mode for the chosen initial state.
RVector work_mode_distribution(const FridgeConfig& c);

// nbar_w nbar_c (1 + nbar_h) > nbar_h (1 + nbar_w)(1 + nbar_c): heat flows out of the cold mode.
bool refrigeration_condition(double nbar_h, double nbar_w, double nbar_c);

}  // namespace phonon
