// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "phonon/errors.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

using units::kEpsilon0;
using units::kHbar;
using units::kPi;

void validate(const TrapGeometry& g) {
  if (!(g.ion_mass > 0) || !(g.ion_charge > 0)) throw InvalidArgument("ion mass and charge must be > 0");
  if (!(g.omega_z > 0)) throw InvalidArgument("axial frequency must be > 0");
  if (!(g.omega_z < std::min(g.omega_x, g.omega_y))) {
    throw InvalidArgument("axial crystal needs omega_z < min(omega_x, omega_y)");
  }
}

}  // namespace

DegenerateCoupling coupling_xi_d(const TrapGeometry& g) {
  validate(g);
  const double m = g.ion_mass;
  const double e2 = g.ion_charge * g.ion_charge;
  DegenerateCoupling c{};
  c.z0 = std::cbrt(e2 / (16.0 * kPi * kEpsilon0 * m * g.omega_z * g.omega_z));
  c.omega_a = std::sqrt(3.0) * g.omega_z;
  c.omega_b = std::sqrt(g.omega_x * g.omega_x - g.omega_z * g.omega_z);
  c.xi_d = std::sqrt(kHbar * std::pow(c.omega_a, 3) / (m * c.omega_b * c.omega_b)) / (8.0 * c.z0);
  return c;
}

TrilinearCoupling coupling_xi_n(const TrapGeometry& g) {
  validate(g);
  const double m = g.ion_mass;
  const double e2 = g.ion_charge * g.ion_charge;
  const double wz2 = g.omega_z * g.omega_z;
  const double wx2 = g.omega_x * g.omega_x;
  if (!(wx2 > 12.0 * wz2 / 5.0)) throw InvalidArgument("radial zigzag mode is unstable for this geometry");
  TrilinearCoupling c{};
  c.z0 = std::cbrt(5.0 * e2 / (16.0 * kPi * kEpsilon0 * m * wz2));
  c.omega_h = std::sqrt(29.0 / 5.0) * g.omega_z;
  c.omega_w = std::sqrt(wx2 - wz2);
  c.omega_c = std::sqrt(wx2 - 12.0 * wz2 / 5.0);
  c.detuning = c.omega_h - c.omega_w - c.omega_c;
  c.xi_n = 9.0 * wz2 * std::sqrt(kHbar / (m * c.omega_h * c.omega_w * c.omega_c)) / (5.0 * c.z0);
  return c;
}

double hopping_rate(double charge, double mass, double omega, double distance) {
  if (!(mass > 0) || !(omega > 0) || !(distance > 0)) throw InvalidArgument("hopping_rate: inputs must be > 0");
  return charge * charge / (4.0 * kPi * kEpsilon0 * 2.0 * mass * omega * std::pow(distance, 3));
}

double dipole_coupling(double q1, double q2, double distance, double m1, double m2, double omega1,
                       double omega2) {
  if (!(distance > 0) || !(m1 > 0) || !(m2 > 0) || !(omega1 > 0) || !(omega2 > 0)) {
    throw InvalidArgument("dipole_coupling: inputs must be > 0");
  }
  return q1 * q2 / (2.0 * kPi * kEpsilon0 * std::pow(distance, 3) * std::sqrt(m1 * m2 * omega1 * omega2));
}

double squeeze_rate(double eta, double rabi, double delta1, double omega_m) {
  const double sum = 1.0 / delta1 - 2.0 / (delta1 - omega_m) + 1.0 / (delta1 - 2.0 * omega_m);
  return eta * eta * rabi * rabi / 8.0 * sum;
}

double beam_splitter_rate(double eta1, double eta2, double rabi1, double rabi2, double delta1,
                          double omega1, double omega2) {
  const double inv = 1.0 / (-delta1) + 1.0 / (-delta1 + omega1 - omega2) + 1.0 / (delta1 - omega1) +
                     1.0 / (delta1 + omega2);
  return eta1 * eta2 * rabi1 * rabi2 * inv;
}

}  // namespace phonon
