// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <fmt/format.h>

#include "phonon/dynamics.hpp"
#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/units.hpp"

namespace phonon {

StaPulseParams default_sta_params(int mode) {
  StaPulseParams p;
  p.omega0 = units::khz_to_rad(38.5);
  p.beta = 0.075;
  p.delta0 = 1.6 * p.omega0;
  p.half_duration = 45.5e-6;
  p.mode = mode;
  return p;
}

PulseSequence uniform_bsb(const ModeRegister& reg, const StaPulseParams& p) {
  if (!(p.omega0 > 0) || !(p.half_duration > 0)) {
    throw InvalidArgument("uniform_bsb needs omega0 > 0 and half_duration > 0");
  }
  const double total = 2.0 * p.half_duration;
  const double w0 = p.omega0;
  const double d0 = p.delta0;
  const double beta = p.beta;
  const OperatorMatrix raising = blue_sideband_raising_part(reg, p.mode);
  const OperatorMatrix detuning = embed(qubit_ops::sigma_z(), Slot::qubit(), reg) * -0.5;
  const OperatorMatrix none = OperatorMatrix::zero(reg);

  auto segment = [&](double offset, double sine_sign, double detuning_sign, double duration,
                     const char* label) {
    PulseSegment s{none, {}, duration, label};
    s.modulated.push_back({raising, [=](double t) {
                             const double x = units::kPi * (t + offset) / total;
                             return Complex(w0 * sine_sign * std::sin(x), w0 * beta);
                           }});
    s.modulated.push_back({detuning, [=](double t) {
                             const double x = units::kPi * (t + offset) / total;
                             return Complex(detuning_sign * d0 * std::cos(x), 0.0);
                           },
                           false});
    return s;
  };

  PulseSequence seq;
  if (p.mid_inversion) {
    seq.segments.push_back(segment(0.0, 1.0, 1.0, p.half_duration, "uniform-bsb first half"));
    seq.segments.push_back(segment(p.half_duration, -1.0, -1.0, p.half_duration, "uniform-bsb second half"));
  } else {
    seq.segments.push_back(segment(0.0, 1.0, 1.0, total, "uniform-bsb passage"));
  }
  return seq;
}

}  // namespace phonon
