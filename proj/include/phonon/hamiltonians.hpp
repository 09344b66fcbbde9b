// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Interaction-picture Hamiltonians for spin-motion and mode-mode couplings.
//
// Every builder returns a hermitian OperatorMatrix in rad/s (hbar = 1).
// Detunings enter as explicit diagonal terms.

#pragma once

#include <optional>
#include <vector>

#include "phonon/hilbert.hpp"

namespace phonon {

struct DriveParams {
  double rabi = 0.0;       // Omega, rad/s
  double phase = 0.0;      // rad
  double detuning = 0.0;   // rad/s, enters as -(detuning/2) sigma_z where used
};

enum class SidebandKind { kBlue, kRed };
enum class Axis { kX, kY, kZ };

// (Omega/2)(sigma+ e^{i phi} + sigma- e^{-i phi}) - (detuning/2) sigma_z.
OperatorMatrix carrier(const ModeRegister& reg, const DriveParams& p);

// Order 1 blue: (i eta Omega/2)(e^{i phi} sigma+ a^dag - e^{-i phi} sigma- a).
// Red swaps sigma+ and sigma-. Order 2 uses eta^2 and squared ladder operators.
// eta is the mode's Lamb-Dicke parameter unless overridden.
OperatorMatrix sideband(const ModeRegister& reg, SidebandKind kind, int order, int mode,
                        const DriveParams& p, std::optional<double> eta = std::nullopt);

// The raising half (i/2) sigma+ a^dag of a first-order blue sideband. A complex
// envelope Omega(t) multiplying it, plus the adjoint, gives
// (i/2)(Omega sigma+ a^dag - Omega* sigma- a).
OperatorMatrix blue_sideband_raising_part(const ModeRegister& reg, int mode);

// rate (a^dag e^{i phi} + a e^{-i phi}) sigma_axis.
OperatorMatrix spin_displacement(const ModeRegister& reg, double rate, double phase, Axis axis,
                                 int mode);
// rate (a^dag^2 e^{i phi} + a^2 e^{-i phi}) sigma_z.
OperatorMatrix spin_squeeze(const ModeRegister& reg, double rate, double phase, int mode);
// rate (a_i^dag a_j e^{i phi} + a_i a_j^dag e^{-i phi}) sigma_z.
OperatorMatrix mode_rotation(const ModeRegister& reg, double rate, double phase, int mode_i,
                             int mode_j);

// sum_i (nu_i + blockade_i) n_i + sum_ij kappa_ij a_i^dag a_j over the listed modes.
OperatorMatrix local_hopping(const ModeRegister& reg, const Eigen::MatrixXd& kappa,
                             const std::vector<double>& nu, const std::vector<int>& modes,
                             const std::vector<double>& blockade_shifts = {});

// -(Omega_c/2)(a_1 a_2^dag + a_1^dag a_2), rotating-wave form.
OperatorMatrix dipole_exchange(const ModeRegister& reg, double omega_c, int mode_1, int mode_2);

// xi |c><c| (a_i^dag a_j e^{i upsilon} + a_i a_j^dag e^{-i upsilon}); control_level 1 = |up>.
OperatorMatrix cbs(const ModeRegister& reg, double xi, double upsilon, int mode_i, int mode_j,
                   int control_level = 1);

// -delta n_a + xi (a b^dag^2 + a^dag b^2). delta is measured as 2 omega_b - omega_a,
// the sign under which the second-order shift reads -2(2 n_b + 1) xi^2 / delta.
OperatorMatrix degenerate_parametric(const ModeRegister& reg, double xi, double delta, int mode_a,
                                     int mode_b);

// delta n_h + xi (a_h^dag a_w a_c + a_h a_w^dag a_c^dag), delta = omega_h - omega_w - omega_c.
OperatorMatrix trilinear(const ModeRegister& reg, double xi, double delta, int mode_h, int mode_w,
                         int mode_c);

// Probe of the first blue sideband of mode_a while it is parametrically coupled to mode_b.
// laser_detuning is measured from the bare sideband: -(delta_L - delta)|up><up|
// + degenerate_parametric + (probe_rabi/2) i (sigma+ a^dag - sigma- a).
OperatorMatrix parametric_sideband_probe(const ModeRegister& reg, double xi, double delta,
                                         double laser_detuning, double probe_rabi, int mode_a,
                                         int mode_b);

// Carrier plus first and second red and blue sidebands at common Rabi rate.
OperatorMatrix lamb_dicke_composite(const ModeRegister& reg, int mode, const DriveParams& p);

// Single-mode unitaries on a truncated space, computed from the exact
// exponential of the truncated generator.
CMatrix displacement_matrix(int dim, Complex alpha);       // exp(alpha a^dag - alpha* a)
CMatrix squeeze_matrix(int dim, Complex r);                // exp((r* a^2 - r a^dag^2)/2)
// exp(theta (a_1^dag a_2 - a_1 a_2^dag)) on a dim1 x dim2 product (mode 1 slow index).
CMatrix two_mode_rotation_matrix(int dim1, int dim2, double theta);
// exp(-i H t) for hermitian H through eigendecomposition.
CMatrix unitary_from_hermitian(const CMatrix& h, double t);

// Cross-Kerr frequency shift of the first blue sideband of mode a.
enum class ShiftMethod { kPerturbative, kExact };
// Perturbative: -2(2 n_b + 1) xi^2 / delta. Exact: E(n_a+1, n_b) - E(n_a, n_b) + delta from
// diagonalizing the conserved 2 n_a + n_b block of degenerate_parametric.
double cross_kerr_shift(double xi, double delta, int n_b, ShiftMethod method, int n_a = 0);

// Gap between the two eigenvalues of the {|1_a,0_b>, |0_a,2_b>} branch at the given delta,
// by exact diagonalization of degenerate_parametric on (dim_a, dim_b).
double parametric_pair_gap(double xi, double delta, int dim_a = 4, int dim_b = 6);

}  // namespace phonon
