// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/vibronic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "phonon/dynamics.hpp"
#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/parallel.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

const Complex kI(0.0, 1.0);

// exp(theta (a1^dag a2 - a1 a2^dag)) as a propagator on a qubit register; use the |down> half.
Propagator rotation(int dim, double theta) {
  const ModeRegister reg = ModeRegister::with_dims({dim, dim});
  const OperatorMatrix x = raise_op(reg, 0) * lower_op(reg, 1);
  const SparseMatrix h = (x.matrix() - SparseMatrix(x.matrix().adjoint())) * (kI * theta);
  return Propagator(OperatorMatrix(reg, h, true), {0.0});
}

// Applies a1 (x) a2 to a row-major two-mode vector.
CVector apply_local(const CMatrix& a1, const CMatrix& a2, const CVector& v) {
  const auto d = a1.rows();
  // Column-major view M(n2, n1) of the row-major index n1 * d + n2.
  const CMatrix m = Eigen::Map<const CMatrix>(v.data(), d, d);
  const CMatrix out = a2 * m * a1.transpose();
  return Eigen::Map<const CVector>(out.data(), d * d);
}

}  // namespace

void validate(const DoktorovParams& p) {
  if (p.omega_initial.size() != 2 || p.omega_final.size() != 2 || p.alpha.size() != 2) {
    throw InvalidArgument("Doktorov parameters need exactly two modes");
  }
  for (double w : p.omega_initial) {
    if (!(w > 0)) throw InvalidArgument("initial frequencies must be > 0");
  }
  for (double w : p.omega_final) {
    if (!(w > 0)) throw InvalidArgument("final frequencies must be > 0");
  }
  for (double a : p.alpha) {
    if (!std::isfinite(a)) throw InvalidArgument("displacements must be finite");
  }
  if (!std::isfinite(p.theta)) throw InvalidArgument("rotation angle must be finite");
}

std::pair<std::vector<double>, std::vector<double>> doktorov_squeezes(const DoktorovParams& p) {
  validate(p);
  double log_ref = 0.0;
  for (double w : p.omega_initial) log_ref += std::log(w) / 4.0;
  for (double w : p.omega_final) log_ref += std::log(w) / 4.0;
  std::vector<double> z, zp;
  for (double w : p.omega_initial) z.push_back(0.5 * (std::log(w) - log_ref));
  for (double w : p.omega_final) zp.push_back(0.5 * (std::log(w) - log_ref));
  return {z, zp};
}

CMatrix doktorov_unitary(const DoktorovParams& p, int dim) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  const auto [z, zp] = doktorov_squeezes(p);
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  auto kron = [](const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
  };
  const CMatrix s = kron(squeeze_matrix(dim, z[0]), squeeze_matrix(dim, z[1]));
  const CMatrix s_final = kron(squeeze_matrix(dim, -zp[0]), squeeze_matrix(dim, -zp[1]));
  const CMatrix d = kron(displacement_matrix(dim, p.alpha[0]), displacement_matrix(dim, p.alpha[1]));
  const CMatrix r = rotation(dim, p.theta).unitary(1.0).topLeftCorner(n, n);
  return d * s_final * r * s;
}

OperatorMatrix doktorov_build(const DoktorovParams& p, int dim) {
  const CMatrix u = doktorov_unitary(p, dim);
  const ModeRegister reg = ModeRegister::with_dims({dim, dim});
  CMatrix full = CMatrix::Zero(reg.dimension(), reg.dimension());
  full.topLeftCorner(u.rows(), u.cols()) = u;
  full.bottomRightCorner(u.rows(), u.cols()) = u;
  return OperatorMatrix(reg, full.sparseView(0.0, 0.0));
}

FcTable vibronic_fc(const DoktorovParams& p, int n_max, int padding, double leakage_threshold) {
  if (n_max < 0 || padding < 2) throw InvalidArgument("need n_max >= 0 and padding >= 2");
  const auto [z, zp] = doktorov_squeezes(p);
  const int w = n_max + 1 + padding;
  const Eigen::Index n = static_cast<Eigen::Index>(w) * w;

  CVector v = CVector::Zero(n);
  v[0] = 1.0;
  v = apply_local(squeeze_matrix(w, z[0]), squeeze_matrix(w, z[1]), v);
  CVector full = CVector::Zero(2 * n);
  full.head(n) = v;
  v = rotation(w, p.theta).apply(full, 1.0).head(n);
  v = apply_local(squeeze_matrix(w, -zp[0]), squeeze_matrix(w, -zp[1]), v);
  v = apply_local(displacement_matrix(w, p.alpha[0]), displacement_matrix(w, p.alpha[1]), v);

  double edge = 0.0;
  for (int n1 = 0; n1 < w; ++n1) {
    for (int n2 = 0; n2 < w; ++n2) {
      if (n1 >= w - 2 || n2 >= w - 2) edge += std::norm(v[n1 * w + n2]);
    }
  }
  if (leakage_threshold > 0 && edge > leakage_threshold) {
    throw LeakageError(fmt::format("Franck-Condon space of {} levels per mode leaks {:.3e}", w, edge), edge);
  }

  FcTable t;
  t.size = n_max + 1;
  t.probability = RVector::Zero(t.size * t.size);
  for (int n1 = 0; n1 < t.size; ++n1) {
    for (int n2 = 0; n2 < t.size; ++n2) t.probability[n1 * t.size + n2] = std::norm(v[n1 * w + n2]);
  }
  t.total = t.probability.sum();
  return t;
}

Spectrum vibronic_spectrum(const FcTable& fc, const std::vector<double>& final_frequencies, double fwhm,
                           double lo, double hi, double step, double min_intensity) {
  if (final_frequencies.size() != 2) throw InvalidArgument("two final frequencies expected");
  if (fwhm < 0) throw InvalidArgument("broadening width must be >= 0");
  if (!(step > 0) || !(hi > lo)) throw InvalidArgument("spectrum grid needs hi > lo and step > 0");
  Spectrum s;
  for (int n1 = 0; n1 < fc.size; ++n1) {
    for (int n2 = 0; n2 < fc.size; ++n2) {
      const double i = fc.at(n1, n2);
      if (i < min_intensity) continue;
      s.stick_position.push_back(n1 * final_frequencies[0] + n2 * final_frequencies[1]);
      s.stick_intensity.push_back(i);
      s.stick_n1.push_back(n1);
      s.stick_n2.push_back(n2);
    }
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  for (long k = 0; k < count; ++k) {
    const double x = lo + step * static_cast<double>(k);
    double y = 0.0;
    if (sigma > 0) {
      for (int n1 = 0; n1 < fc.size; ++n1) {
        for (int n2 = 0; n2 < fc.size; ++n2) {
          const double u = (x - n1 * final_frequencies[0] - n2 * final_frequencies[1]) / sigma;
          if (std::abs(u) < 12.0) y += fc.at(n1, n2) * std::exp(-0.5 * u * u);
        }
      }
    }
    s.grid.push_back(x);
    s.trace.push_back(y);
  }
  return s;
}

ProgressionWeights progression_weights(const FcTable& fc) {
  ProgressionWeights w;
  for (int n1 = 0; n1 < fc.size; ++n1) {
    for (int n2 = 0; n2 < fc.size; ++n2) {
      const double p = fc.at(n1, n2);
      if (n1 == 0 && n2 == 0) {
        w.origin += p;
      } else if (n2 == 0) {
        w.mode1 += p;
      } else if (n1 == 0) {
        w.mode2 += p;
      } else {
        w.combination += p;
      }
    }
  }
  return w;
}

std::vector<long> vibronic_sample(const FcTable& fc, long shots, std::uint64_t seed) {
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
  Rng rng = trajectory_rng(seed, 0);
  std::discrete_distribution<int> dist(fc.probability.data(), fc.probability.data() + fc.probability.size());
  std::vector<long> counts(static_cast<std::size_t>(fc.probability.size()), 0);
  for (long s = 0; s < shots; ++s) ++counts[static_cast<std::size_t>(dist(rng))];
  return counts;
}

DoktorovParams so2_to_so2_cation() {
  using units::wavenumber_to_rad;
  return {{wavenumber_to_rad(1178.4), wavenumber_to_rad(518.9)},
          {wavenumber_to_rad(1112.7), wavenumber_to_rad(415.0)},
          {-0.026, 1.716},
          0.189};
}

DoktorovParams so2_anion_to_so2() {
  using units::wavenumber_to_rad;
  return {{wavenumber_to_rad(989.5), wavenumber_to_rad(451.4)},
          {wavenumber_to_rad(1178.4), wavenumber_to_rad(518.9)},
          {1.360, -0.264},
          0.065};
}

}  // namespace phonon
