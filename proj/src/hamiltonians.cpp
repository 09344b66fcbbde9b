// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/hamiltonians.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "phonon/errors.hpp"

namespace phonon {

namespace {

using qubit_ops::projector_up;
using qubit_ops::sigma_minus;
using qubit_ops::sigma_plus;
using qubit_ops::sigma_z;

const Complex kI(0.0, 1.0);

CMatrix pauli(Axis axis) {
  switch (axis) {
    case Axis::kX: return qubit_ops::sigma_x();
    case Axis::kY: return qubit_ops::sigma_y();
    case Axis::kZ: return qubit_ops::sigma_z();
  }
  return qubit_ops::sigma_z();
}

void require_mode(const ModeRegister& reg, int mode, const char* who) {
  if (mode < 0 || mode >= reg.num_modes()) {
    throw InvalidArgument(fmt::format("{}: mode {} out of range", who, mode));
  }
}

void require_distinct(std::initializer_list<int> modes, const char* who) {
  for (auto i = modes.begin(); i != modes.end(); ++i) {
    for (auto j = std::next(i); j != modes.end(); ++j) {
      if (*i == *j) throw InvalidArgument(fmt::format("{}: repeated mode index {}", who, *i));
    }
  }
}

// X + X^dagger, flagged hermitian.
OperatorMatrix hermitian_part(const OperatorMatrix& x) {
  return OperatorMatrix(x.reg(), SparseMatrix(x.matrix() + SparseMatrix(x.matrix().adjoint())), true);
}

OperatorMatrix as_hermitian(const OperatorMatrix& x) { return OperatorMatrix(x.reg(), x.matrix(), true); }

CMatrix power(const CMatrix& m, int k) {
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

}  // namespace

OperatorMatrix carrier(const ModeRegister& reg, const DriveParams& p) {
  const OperatorMatrix sp = embed(sigma_plus(), Slot::qubit(), reg);
  OperatorMatrix h = hermitian_part(sp * (0.5 * p.rabi * std::exp(kI * p.phase)));
  if (p.detuning != 0.0) h = h + embed(sigma_z(), Slot::qubit(), reg) * (-0.5 * p.detuning);
  return as_hermitian(h);
}

OperatorMatrix sideband(const ModeRegister& reg, SidebandKind kind, int order, int mode,
                        const DriveParams& p, std::optional<double> eta) {
  if (order != 1 && order != 2) throw InvalidArgument(fmt::format("sideband order {} is not 1 or 2", order));
  require_mode(reg, mode, "sideband");
  const double e = eta.value_or(reg.modes()[mode].lamb_dicke);
  const Ladder l = mode_ladder(reg.mode_dim(mode));
  const CMatrix up = power(l.raise, order);
  const CMatrix spin = kind == SidebandKind::kBlue ? sigma_plus() : sigma_minus();
  // i c e^{i phi} spin a^dag^k, plus its adjoint -i c e^{-i phi} spin^dag a^k.
  const Complex c = kI * 0.5 * std::pow(e, order) * p.rabi * std::exp(kI * p.phase);
  const OperatorMatrix x = embed_product({{spin, Slot::qubit()}, {up, Slot::of_mode(mode)}}, reg) * c;
  OperatorMatrix h = hermitian_part(x);
  if (p.detuning != 0.0) h = h + embed(sigma_z(), Slot::qubit(), reg) * (-0.5 * p.detuning);
  return as_hermitian(h);
}

OperatorMatrix blue_sideband_raising_part(const ModeRegister& reg, int mode) {
  require_mode(reg, mode, "blue_sideband_raising_part");
  const Ladder l = mode_ladder(reg.mode_dim(mode));
  return embed_product({{sigma_plus(), Slot::qubit()}, {l.raise, Slot::of_mode(mode)}}, reg) * (0.5 * kI);
}

OperatorMatrix spin_displacement(const ModeRegister& reg, double rate, double phase, Axis axis,
                                 int mode) {
  require_mode(reg, mode, "spin_displacement");
  const Ladder l = mode_ladder(reg.mode_dim(mode));
  const CMatrix q = l.raise * std::exp(kI * phase) + l.lower * std::exp(-kI * phase);
  return as_hermitian(embed_product({{pauli(axis), Slot::qubit()}, {q, Slot::of_mode(mode)}}, reg) * rate);
}

OperatorMatrix spin_squeeze(const ModeRegister& reg, double rate, double phase, int mode) {
  require_mode(reg, mode, "spin_squeeze");
  const Ladder l = mode_ladder(reg.mode_dim(mode));
  const CMatrix q = l.raise * l.raise * std::exp(kI * phase) + l.lower * l.lower * std::exp(-kI * phase);
  return as_hermitian(embed_product({{sigma_z(), Slot::qubit()}, {q, Slot::of_mode(mode)}}, reg) * rate);
}

OperatorMatrix mode_rotation(const ModeRegister& reg, double rate, double phase, int mode_i,
                             int mode_j) {
  require_mode(reg, mode_i, "mode_rotation");
  require_mode(reg, mode_j, "mode_rotation");
  require_distinct({mode_i, mode_j}, "mode_rotation");
  const Ladder li = mode_ladder(reg.mode_dim(mode_i));
  const Ladder lj = mode_ladder(reg.mode_dim(mode_j));
  const OperatorMatrix x = embed_product(
      {{sigma_z(), Slot::qubit()}, {li.raise, Slot::of_mode(mode_i)}, {lj.lower, Slot::of_mode(mode_j)}}, reg);
  return hermitian_part(x * (rate * std::exp(kI * phase)));
}

OperatorMatrix local_hopping(const ModeRegister& reg, const Eigen::MatrixXd& kappa,
                             const std::vector<double>& nu, const std::vector<int>& modes,
                             const std::vector<double>& blockade_shifts) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  if (kappa.rows() != n || kappa.cols() != n) throw InvalidArgument("kappa must be square over the listed modes");
  if (static_cast<Eigen::Index>(nu.size()) != n) throw InvalidArgument("need one site shift per mode");
  if (!blockade_shifts.empty() && static_cast<Eigen::Index>(blockade_shifts.size()) != n) {
    throw InvalidArgument("blockade shifts must be empty or one per mode");
  }
  if ((kappa - kappa.transpose()).cwiseAbs().maxCoeff() > 0.0) throw InvalidArgument("kappa must be symmetric");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (kappa(i, i) != 0.0) throw InvalidArgument("kappa must have zero diagonal");
  }
  for (int m : modes) require_mode(reg, m, "local_hopping");

  OperatorMatrix h = OperatorMatrix::zero(reg);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double shift = nu[i] + (blockade_shifts.empty() ? 0.0 : blockade_shifts[i]);
    if (shift != 0.0) h = h + number_op(reg, modes[i]) * shift;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || kappa(i, j) == 0.0) continue;
      h = h + raise_op(reg, modes[i]) * lower_op(reg, modes[j]) * kappa(i, j);
    }
  }
  return as_hermitian(h);
}

OperatorMatrix dipole_exchange(const ModeRegister& reg, double omega_c, int mode_1, int mode_2) {
  require_mode(reg, mode_1, "dipole_exchange");
  require_mode(reg, mode_2, "dipole_exchange");
  require_distinct({mode_1, mode_2}, "dipole_exchange");
  const OperatorMatrix x = raise_op(reg, mode_1) * lower_op(reg, mode_2);
  return hermitian_part(x * (-0.5 * omega_c));
}

OperatorMatrix cbs(const ModeRegister& reg, double xi, double upsilon, int mode_i, int mode_j,
                   int control_level) {
  require_mode(reg, mode_i, "cbs");
  require_mode(reg, mode_j, "cbs");
  require_distinct({mode_i, mode_j}, "cbs");
  if (control_level != 0 && control_level != 1) throw InvalidArgument("control level must be 0 or 1");
  const CMatrix proj = control_level == 1 ? projector_up() : qubit_ops::projector_down();
  const Ladder li = mode_ladder(reg.mode_dim(mode_i));
  const Ladder lj = mode_ladder(reg.mode_dim(mode_j));
  const OperatorMatrix x = embed_product(
      {{proj, Slot::qubit()}, {li.raise, Slot::of_mode(mode_i)}, {lj.lower, Slot::of_mode(mode_j)}}, reg);
  return hermitian_part(x * (xi * std::exp(kI * upsilon)));
}

OperatorMatrix degenerate_parametric(const ModeRegister& reg, double xi, double delta, int mode_a,
                                     int mode_b) {
  require_mode(reg, mode_a, "degenerate_parametric");
  require_mode(reg, mode_b, "degenerate_parametric");
  require_distinct({mode_a, mode_b}, "degenerate_parametric");
  const Ladder la = mode_ladder(reg.mode_dim(mode_a));
  const Ladder lb = mode_ladder(reg.mode_dim(mode_b));
  const OperatorMatrix x =
      embed_product({{la.lower, Slot::of_mode(mode_a)}, {lb.raise * lb.raise, Slot::of_mode(mode_b)}}, reg);
  return as_hermitian(hermitian_part(x * xi) + number_op(reg, mode_a) * (-delta));
}

OperatorMatrix trilinear(const ModeRegister& reg, double xi, double delta, int mode_h, int mode_w,
                         int mode_c) {
  for (int m : {mode_h, mode_w, mode_c}) require_mode(reg, m, "trilinear");
  require_distinct({mode_h, mode_w, mode_c}, "trilinear");
  const Ladder lh = mode_ladder(reg.mode_dim(mode_h));
  const Ladder lw = mode_ladder(reg.mode_dim(mode_w));
  const Ladder lc = mode_ladder(reg.mode_dim(mode_c));
  const OperatorMatrix x = embed_product(
      {{lh.raise, Slot::of_mode(mode_h)}, {lw.lower, Slot::of_mode(mode_w)}, {lc.lower, Slot::of_mode(mode_c)}},
      reg);
  OperatorMatrix h = hermitian_part(x * xi);
  if (delta != 0.0) h = h + number_op(reg, mode_h) * delta;
  return as_hermitian(h);
}

OperatorMatrix parametric_sideband_probe(const ModeRegister& reg, double xi, double delta,
                                         double laser_detuning, double probe_rabi, int mode_a,
                                         int mode_b) {
  const OperatorMatrix mech = degenerate_parametric(reg, xi, delta, mode_a, mode_b);
  const OperatorMatrix up = embed(projector_up(), Slot::qubit(), reg) * (-(laser_detuning - delta));
  const OperatorMatrix probe = hermitian_part(blue_sideband_raising_part(reg, mode_a) * probe_rabi);
  return as_hermitian(mech + up + probe);
}

OperatorMatrix lamb_dicke_composite(const ModeRegister& reg, int mode, const DriveParams& p) {
  DriveParams q = p;
  q.detuning = 0.0;
  OperatorMatrix h = carrier(reg, q);
  for (int order : {1, 2}) {
    h = h + sideband(reg, SidebandKind::kBlue, order, mode, q);
    h = h + sideband(reg, SidebandKind::kRed, order, mode, q);
  }
  return as_hermitian(h);
}

CMatrix unitary_from_hermitian(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed");
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<Complex>() * (-kI * t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix displacement_matrix(int dim, Complex alpha) {
  const Ladder l = mode_ladder(dim);
  // exp(G) with anti-hermitian G = alpha a^dag - alpha* a, written as exp(-i H) with H = i G.
  const CMatrix g = alpha * l.raise - std::conj(alpha) * l.lower;
  return unitary_from_hermitian(kI * g, 1.0);
}

CMatrix squeeze_matrix(int dim, Complex r) {
  const Ladder l = mode_ladder(dim);
  const CMatrix g = 0.5 * (std::conj(r) * l.lower * l.lower - r * l.raise * l.raise);
  return unitary_from_hermitian(kI * g, 1.0);
}

CMatrix two_mode_rotation_matrix(int dim1, int dim2, double theta) {
  const Ladder l1 = mode_ladder(dim1);
  const Ladder l2 = mode_ladder(dim2);
  auto kron = [](const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  };
  const CMatrix g = theta * (kron(l1.raise, l2.lower) - kron(l1.lower, l2.raise));
  return unitary_from_hermitian(kI * g, 1.0);
}

double cross_kerr_shift(double xi, double delta, int n_b, ShiftMethod method, int n_a) {
  if (n_b < 0 || n_a < 0) throw InvalidArgument("occupations must be >= 0");
  if (method == ShiftMethod::kPerturbative) {
    if (delta == 0.0) throw InvalidArgument("perturbative cross-Kerr shift needs delta != 0");
    return -2.0 * (2 * n_b + 1) * xi * xi / delta;
  }
  // 2 n_a + n_b is conserved; the block {|k, K - 2k>} is finite, so no truncation enters.
  auto dressed_energy = [&](int na) {
    const int big_k = 2 * na + n_b;
    const int size = big_k / 2 + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
    for (int k = 0; k < size; ++k) {
      h(k, k) = -delta * k;
      if (k + 1 < size) {
        const double nb = big_k - 2 * k;
        const double v = xi * std::sqrt((k + 1.0) * nb * (nb - 1.0));
        h(k + 1, k) = v;
        h(k, k + 1) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::Index best = 0;
    es.eigenvectors().row(na).cwiseAbs().maxCoeff(&best);
    return es.eigenvalues()[best];
  };
  return dressed_energy(n_a + 1) - dressed_energy(n_a) + delta;
}

double parametric_pair_gap(double xi, double delta, int dim_a, int dim_b) {
  const ModeRegister reg = ModeRegister::with_dims({dim_a, dim_b});
  const CMatrix h = degenerate_parametric(reg, xi, delta, 0, 1).dense();
  // Restrict to the qubit-down half; the qubit does not couple.
  const Eigen::Index half = reg.qubit_stride();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.topLeftCorner(half, half));
  const Eigen::Index i10 = reg.index(0, {1, 0});
  const Eigen::Index i02 = reg.index(0, {0, 2});
  // The two eigenvectors carrying the most weight on the pair.
  Eigen::VectorXd weight(half);
  for (Eigen::Index k = 0; k < half; ++k) {
    weight[k] = std::norm(es.eigenvectors()(i10, k)) + std::norm(es.eigenvectors()(i02, k));
  }
  Eigen::Index first = 0;
  weight.maxCoeff(&first);
  weight[first] = -1.0;
  Eigen::Index second = 0;
  weight.maxCoeff(&second);
  return std::abs(es.eigenvalues()[first] - es.eigenvalues()[second]);
}

}  // namespace phonon
