// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form coupling coefficients. Inputs in SI, outputs in rad/s.

#pragma once

namespace phonon {

struct TrapGeometry {
  double ion_mass = 0.0;    // kg
  double ion_charge = 0.0;  // C
  double omega_x = 0.0;     // rad/s
  double omega_y = 0.0;
  double omega_z = 0.0;
};

// Two-ion crystal, out-of-phase axial stretch (a) and radial rocking (b) modes.
struct DegenerateCoupling {
  double z0;       // half the ion separation, m
  double omega_a;  // sqrt(3) omega_z
  double omega_b;  // sqrt(omega_x^2 - omega_z^2)
  double xi_d;     // (1/8 z0) sqrt(hbar omega_a^3 / (M omega_b^2))
};

// Three-ion crystal: axial zigzag (h), radial tilt (w), radial zigzag (c).
struct TrilinearCoupling {
  double z0;       // (5 e^2 / (16 pi eps0 M omega_z^2))^{1/3}
  double omega_h;  // sqrt(29/5) omega_z
  double omega_w;  // sqrt(omega_x^2 - omega_z^2)
  double omega_c;  // sqrt(omega_x^2 - 12 omega_z^2 / 5)
  double detuning; // omega_h - omega_w - omega_c
  double xi_n;     // 9 omega_z^2 sqrt(hbar / (M omega_h omega_w omega_c)) / (5 z0)
};

DegenerateCoupling coupling_xi_d(const TrapGeometry& g);
TrilinearCoupling coupling_xi_n(const TrapGeometry& g);

// Local-mode hopping rate e^2 / (4 pi eps0 2 M omega d^3).
double hopping_rate(double charge, double mass, double omega, double distance);
// Omega_c = q1 q2 / (2 pi eps0 r^3 sqrt(M1 M2 omega1 omega2)).
double dipole_coupling(double q1, double q2, double distance, double m1, double m2, double omega1,
                       double omega2);

// Spin-dependent squeezing rate per unit time from a two-tone Raman drive:
// (eta^2 Omega^2 / 8)(1/delta1 - 2/(delta1 - omega) + 1/(delta1 - 2 omega)).
double squeeze_rate(double eta, double rabi, double delta1, double omega_m);
// Beam-splitter rate eta1 eta2 Omega1 Omega2 / Delta_BS with
// 1/Delta_BS = 1/(-d1) + 1/(-d1 + w1 - w2) + 1/(d1 - w1) + 1/(d1 + w2).
double beam_splitter_rate(double eta1, double eta2, double rabi1, double rabi2, double delta1,
                          double omega1, double omega2);

}  // namespace phonon
