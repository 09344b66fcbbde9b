// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "phonon/dynamics.hpp"
#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/parallel.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

using units::kPi;
const Complex kI(0.0, 1.0);

void require_mode(const ModeRegister& reg, int mode) {
  if (mode < 0 || mode >= reg.num_modes()) throw InvalidArgument(fmt::format("mode {} out of range", mode));
}

// Amplitudes moved by +shift quanta on one mode; entries pushed past the cutoff are dropped.
CVector shift_mode(const HybridState& state, int mode, int shift) {
  const ModeRegister& reg = state.reg();
  const Eigen::Index stride = reg.stride(mode);
  const int d = reg.mode_dim(mode);
  CVector out = CVector::Zero(reg.dimension());
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    const int n = reg.occupation_of(i, mode) + shift;
    if (n >= 0 && n < d) out[i + shift * stride] = state[i];
  }
  return out;
}

struct LinearFit {
  double a, b, c, rss;
};

LinearFit fit_at(const std::vector<double>& phis, const std::vector<double>& values, double k) {
  const auto n = static_cast<Eigen::Index>(phis.size());
  Eigen::MatrixXd m(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = std::cos(k * phis[i]);
    m(i, 1) = std::sin(k * phis[i]);
    m(i, 2) = 1.0;
    y[i] = values[i];
  }
  const Eigen::Vector3d x = m.colPivHouseholderQr().solve(y);
  return {x[0], x[1], x[2], (m * x - y).squaredNorm()};
}

}  // namespace

HybridState phonon_add(const HybridState& state, int mode, double leakage_threshold) {
  require_mode(state.reg(), mode);
  const double top = phonon_distribution(state, mode)[state.reg().mode_dim(mode) - 1];
  if (leakage_threshold > 0 && top > leakage_threshold) {
    throw LeakageError(fmt::format("phonon_add: top Fock level holds {:.3e}", top), top);
  }
  HybridState out(state.reg(), shift_mode(state, mode, +1));
  check_leakage(out, leakage_threshold, "phonon_add");
  return out;
}

SubtractResult phonon_subtract_conditioned(const HybridState& state, int mode) {
  require_mode(state.reg(), mode);
  SubtractResult r;
  r.success_probability = std::max(0.0, 1.0 - phonon_distribution(state, mode)[0]);
  if (r.success_probability > 1e-15) {
    r.success = true;
    r.state.emplace(state.reg(), shift_mode(state, mode, -1));
  }
  return r;
}

SubtractResult phonon_subtract(const HybridState& state, int mode, Rng& rng) {
  SubtractResult r = phonon_subtract_conditioned(state, mode);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (!r.success || u(rng) >= r.success_probability) {
    r.success = false;
    r.state.reset();
  }
  return r;
}

TruthTable fredkin_truth_table(double xi, int dim, long shots, std::uint64_t seed) {
  if (!(xi > 0)) throw InvalidArgument("CBS rate must be > 0");
  if (dim < 2) throw InvalidArgument("Fredkin register needs dim >= 2");
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
  const ModeRegister reg = ModeRegister::with_dims({dim, dim});
  const Propagator u(cbs(reg, xi, 0.0, 0, 1, 1));
  const double tau = kPi / (2.0 * xi);

  TruthTable t;
  t.probabilities.setZero();
  t.expected.setZero();
  auto index = [&](int row) { return reg.index(row / 4, {(row / 2) % 2, row % 2}); };
  for (int row = 0; row < 8; ++row) {
    const int q = row / 4;
    const int n = (row / 2) % 2;
    const int m = row % 2;
    t.expected(row, q == 0 ? row : q * 4 + m * 2 + n) = 1.0;
    const CVector out = u.apply(CVector::Unit(reg.dimension(), index(row)), tau);
    Eigen::Matrix<double, 8, 1> p;
    for (int col = 0; col < 8; ++col) p[col] = std::norm(out[index(col)]);
    if (shots > 0) {
      Rng rng = trajectory_rng(seed, static_cast<std::uint64_t>(row));
      std::discrete_distribution<int> dist(p.data(), p.data() + 8);
      Eigen::Matrix<double, 8, 1> counts = Eigen::Matrix<double, 8, 1>::Zero();
      for (long s = 0; s < shots; ++s) counts[dist(rng)] += 1.0;
      p = counts / static_cast<double>(shots);
    }
    t.probabilities.row(row) = p.transpose();
  }
  t.max_deviation = (t.probabilities - t.expected).cwiseAbs().maxCoeff();
  t.min_success = 1.0;
  for (int row = 0; row < 8; ++row) {
    Eigen::Index col;
    t.expected.row(row).maxCoeff(&col);
    t.min_success = std::min(t.min_success, t.probabilities(row, col));
  }
  return t;
}

double cswap_defect(int dim, int max_total) {
  if (max_total < 1 || max_total >= dim) throw InvalidArgument("need 1 <= max_total < dim");
  const ModeRegister reg = ModeRegister::with_dims({dim, dim, dim});
  // xi = 1: one CBS pulse lasts pi / 2.
  const Propagator parity(cbs(reg, 1.0, 0.0, 0, 2, 1));
  const Propagator swap(cbs(reg, 1.0, kPi / 2.0, 0, 1, 1));
  double worst = 0.0;
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n <= max_total; ++n) {
      for (int m = 0; n + m <= max_total; ++m) {
        const CVector in = CVector::Unit(reg.dimension(), reg.index(q, {n, m, 0}));
        const CVector out = swap.apply(parity.apply(in, kPi), kPi / 2.0);
        const CVector want =
            CVector::Unit(reg.dimension(), q == 0 ? reg.index(q, {n, m, 0}) : reg.index(q, {m, n, 0}));
        worst = std::max(worst, (out - want).norm());
      }
    }
  }
  return worst;
}

HybridState noon_state(const ModeRegister& reg, int n, int mode_1, int mode_2, double phi_s) {
  require_mode(reg, mode_1);
  require_mode(reg, mode_2);
  if (mode_1 == mode_2) throw InvalidArgument("NOON modes must differ");
  if (n < 1) throw InvalidArgument("NOON order must be >= 1");
  if (n >= reg.mode_dim(mode_1) || n >= reg.mode_dim(mode_2)) {
    throw InvalidArgument(fmt::format("NOON order {} does not fit the mode truncation", n));
  }
  std::vector<int> a(reg.num_modes(), 0);
  std::vector<int> b(reg.num_modes(), 0);
  a[mode_1] = n;
  b[mode_2] = n;
  CVector amps = CVector::Zero(reg.dimension());
  amps[reg.index(0, a)] = 1.0;
  amps[reg.index(0, b)] = std::exp(kI * (n * phi_s));
  return HybridState(reg, amps);
}

std::vector<double> noon_parity_fringe(const HybridState& state, int mode_1, int mode_2,
                                       const std::vector<double>& phis) {
  const ModeRegister& reg = state.reg();
  require_mode(reg, mode_1);
  require_mode(reg, mode_2);
  const OperatorMatrix hop = raise_op(reg, mode_2) * lower_op(reg, mode_1);  // a1 a2^dag
  const OperatorMatrix parity = parity_op(reg, mode_1);
  std::vector<double> out(phis.size());
  parallel_for(phis.size(), [&](std::size_t i) {
    // exp(G) with G = (pi/4)(X e^{-i phi} - X^dag e^{i phi}) is exp(-i H) for H = i G.
    const SparseMatrix x = hop.matrix() * std::exp(-kI * phis[i]);
    const SparseMatrix g = (x - SparseMatrix(x.adjoint())) * Complex(kPi / 4.0, 0.0);
    const OperatorMatrix h(reg, g * kI, true);
    const HybridState out_state = propagate_static(h, 1.0, state, {0.0});
    out[i] = expectation(out_state, parity).real();
  });
  return out;
}

FringeFit fit_fringe(const std::vector<double>& phis, const std::vector<double>& values, double k_max) {
  if (phis.size() != values.size()) throw InvalidArgument("phase and value lists differ in length");
  if (phis.size() < 4) throw InvalidArgument("fringe fit needs at least 4 points");
  if (!(k_max > 0)) throw InvalidArgument("k_max must be > 0");
  const double step = 0.01;
  double best_k = step;
  double best_rss = std::numeric_limits<double>::infinity();
  for (double k = step; k <= k_max + 1e-12; k += step) {
    const double rss = fit_at(phis, values, k).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_k = k;
    }
  }
  auto objective = [&](double k) { return fit_at(phis, values, k).rss; };
  const auto refined = boost::math::tools::brent_find_minima(
      objective, std::max(1e-6, best_k - step), best_k + step, std::numeric_limits<double>::digits);
  const LinearFit f = fit_at(phis, values, refined.first);
  FringeFit out;
  out.k = refined.first;
  out.contrast = std::hypot(f.a, f.b);
  out.phase = std::atan2(-f.b, f.a);
  out.offset = f.c;
  out.rms_residual = std::sqrt(f.rss / static_cast<double>(phis.size()));
  return out;
}

OperatorMatrix half_number_difference(const ModeRegister& reg, int mode_1, int mode_2) {
  return (number_op(reg, mode_1) - number_op(reg, mode_2)) * 0.5;
}

double qfi(const HybridState& state, const OperatorMatrix& generator) {
  if (!generator.hermitian()) throw InvalidArgument("QFI generator must be hermitian");
  const CVector g = generator.apply(state.amplitudes());
  const double mean = state.amplitudes().dot(g).real();
  return 4.0 * (g.squaredNorm() - mean * mean);
}

}  // namespace phonon
