// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/gkp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

using units::kPi;
const Complex kI(0.0, 1.0);
constexpr int kPad = 40;

CMatrix padded_density(const HybridState& state, int mode, int extra) {
  const CMatrix rho = mode_density(state, mode);
  const Eigen::Index d = rho.rows() + extra;
  CMatrix out = CMatrix::Zero(d, d);
  out.topLeftCorner(rho.rows(), rho.cols()) = rho;
  return out;
}

}  // namespace

void validate(const GkpParams& p) {
  if (!(p.spacing > 0)) throw InvalidArgument("GKP spacing must be > 0");
  if (p.half_width < 0) throw InvalidArgument("GKP half width must be >= 0");
  if (!(p.envelope_variance > 0)) throw InvalidArgument("GKP envelope variance must be > 0");
  if (p.dim < 4) throw InvalidArgument("GKP dimension must be >= 4");
}

double gkp_lattice_alpha(const GkpParams& p) { return p.spacing / std::sqrt(2.0); }
Complex gkp_x_shift(const GkpParams& p) { return {gkp_lattice_alpha(p) / 2.0, 0.0}; }
Complex gkp_z_shift(const GkpParams& p) { return {0.0, kPi / gkp_lattice_alpha(p)}; }

HybridState gkp_prepare(const GkpParams& p) {
  validate(p);
  const int work = p.dim + kPad;
  const CVector tooth = squeeze_matrix(work, p.squeeze).col(0);
  const double step = gkp_lattice_alpha(p);
  CVector sum = CVector::Zero(work);
  for (int k = -p.half_width; k <= p.half_width; ++k) {
    const double x = k * p.spacing;
    const double c = std::exp(-x * x / (2.0 * p.envelope_variance));
    sum += c * (displacement_matrix(work, k * step) * tooth);
  }
  sum.normalize();
  const double outside = sum.tail(work - p.dim + 2).squaredNorm();
  if (p.leakage_threshold > 0 && outside > p.leakage_threshold) {
    throw LeakageError(fmt::format("GKP state needs more than {} Fock levels (leakage {:.3e})", p.dim, outside),
                       outside);
  }
  const ModeRegister reg = ModeRegister::with_dims({p.dim});
  CVector down(2);
  down << 1.0, 0.0;
  return product_state(reg, down, {sum.head(p.dim)});
}

Complex gkp_logical_expect(const HybridState& state, int mode, const GkpParams& p, Pauli which) {
  const CMatrix rho = padded_density(state, mode, kPad);
  const int work = static_cast<int>(rho.rows());
  const CMatrix x = displacement_matrix(work, gkp_x_shift(p));
  const CMatrix z = displacement_matrix(work, gkp_z_shift(p));
  switch (which) {
    case Pauli::kX:
      return (rho * x).trace();
    case Pauli::kZ:
      return (rho * z).trace();
    case Pauli::kY:
      return kI * (rho * x * z).trace();
  }
  throw InvalidArgument("unknown Pauli");
}

double gkp_anticommutator_defect(const GkpParams& p, int block, int work_dim) {
  if (block < 1 || block >= work_dim) throw InvalidArgument("block must lie inside the working dimension");
  const CMatrix x = displacement_matrix(work_dim, gkp_x_shift(p));
  const CMatrix z = displacement_matrix(work_dim, gkp_z_shift(p));
  const CMatrix anti = x * z + z * x;
  return anti.topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

Marginal gkp_marginal(const HybridState& state, int mode, Quadrature q, double half_range, int samples) {
  if (samples < 3 || !(half_range > 0)) throw InvalidArgument("marginal grid needs >= 3 samples and a positive range");
  const CMatrix rho = mode_density(state, mode);
  const auto d = rho.rows();
  Marginal m;
  CVector w(d);
  for (int s = 0; s < samples; ++s) {
    const double u = -half_range + 2.0 * half_range * s / (samples - 1);
    // Hermite functions by the stable three-term recurrence.
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * u * u);
    for (Eigen::Index n = 0; n < d; ++n) {
      // <q|n> is psi_n(q) for position and (-i)^n psi_n(p) for momentum; w holds the conjugate.
      Complex phase(1.0, 0.0);
      if (q == Quadrature::kMomentum) phase = std::pow(Complex(0.0, 1.0), static_cast<int>(n % 4));
      w[n] = phase * cur;
      const double next = std::sqrt(2.0 / (n + 1)) * u * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
    }
    m.points.push_back(u);
    m.density.push_back(w.dot(rho * w).real());
  }
  return m;
}

std::vector<double> marginal_peaks(const Marginal& m, double threshold) {
  double top = 0.0;
  for (double v : m.density) top = std::max(top, v);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < m.density.size(); ++i) {
    const double v = m.density[i];
    if (v > m.density[i - 1] && v >= m.density[i + 1] && v > threshold * top) out.push_back(m.points[i]);
  }
  return out;
}

}  // namespace phonon
