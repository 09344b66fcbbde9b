// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace phonon::units {

inline constexpr double kPi = std::numbers::pi;

// SI values (2019 redefinition; eps0 from CODATA 2018).
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kEpsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s

inline constexpr double kYb171Mass = 170.936323 * kAtomicMassUnit;

// Angular frequency of one wavenumber: 2*pi*c*(100 /m) = 2*pi*29.9792458 GHz.
inline constexpr double kRadPerSecondPerWavenumber = 2.0 * kPi * kSpeedOfLight * 100.0;

constexpr double hz_to_rad(double hz) { return 2.0 * kPi * hz; }
constexpr double khz_to_rad(double khz) { return 2.0 * kPi * 1e3 * khz; }
constexpr double wavenumber_to_rad(double cm1) { return cm1 * kRadPerSecondPerWavenumber; }
constexpr double rad_to_wavenumber(double w) { return w / kRadPerSecondPerWavenumber; }

}  // namespace phonon::units
