// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force Franck-Condon amplitudes for test comparisons.
//
// Squeezed vacua are written down in closed form, the mode rotation is expanded
// binomially in the creation operators, and the remaining single-mode squeeze
// and displacement come from dense matrix exponentials of their generators.
// The squeeze reference is the first initial frequency rather than a mean.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace phonon::testing {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// S(r)|0> with S(r) = exp((r a^2 - r a^dag^2) / 2), r real.
inline Eigen::VectorXcd squeezed_vacuum(double r, int dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double t = std::tanh(r);
  for (int k = 0; 2 * k < dim; ++k) {
    const double mag = 0.5 * log_factorial(2 * k) - k * std::log(2.0) - log_factorial(k);
    const double sign = (t > 0 && k % 2 == 1) ? -1.0 : 1.0;
    v[2 * k] = (k == 0 ? 1.0 : sign * std::exp(mag + k * std::log(std::abs(t)))) / std::sqrt(std::cosh(r));
  }
  return v;
}

inline Mat ladder(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Mat squeeze_exp(double r, int dim) {
  const Mat a = ladder(dim);
  const Mat g = 0.5 * r * (a * a - a.adjoint() * a.adjoint());
  return g.exp();
}

inline Mat displace_exp(double alpha, int dim) {
  const Mat a = ladder(dim);
  const Mat g = alpha * (a.adjoint() - a);
  return g.exp();
}

// c(m, n) -> R c with a1^dag -> cos a1^dag - sin a2^dag, a2^dag -> sin a1^dag + cos a2^dag.
inline Mat rotate(const Mat& c, double theta) {
  const int dim = static_cast<int>(c.rows());
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  Mat out = Mat::Zero(dim, dim);
  auto lbinom = [](int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); };
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; m + n < dim; ++n) {
      if (std::abs(c(m, n)) < 1e-300) continue;
      const double norm = -0.5 * (log_factorial(m) + log_factorial(n));
      for (int j = 0; j <= m; ++j) {
        for (int k = 0; k <= n; ++k) {
          const int p = j + k;
          const int q = m + n - p;
          // cos^j (-sin)^(m-j) sin^k cos^(n-k)
          const int cos_pow = j + n - k;
          const int sin_pow = m - j + k;
          if ((cs == 0.0 && cos_pow > 0) || (sn == 0.0 && sin_pow > 0)) continue;
          double lmag = lbinom(m, j) + lbinom(n, k) + norm + 0.5 * (log_factorial(p) + log_factorial(q));
          if (cos_pow > 0) lmag += cos_pow * std::log(std::abs(cs));
          if (sin_pow > 0) lmag += sin_pow * std::log(std::abs(sn));
          double sign = ((m - j) % 2 == 1) ? -1.0 : 1.0;
          if (cs < 0 && cos_pow % 2 == 1) sign = -sign;
          if (sn < 0 && sin_pow % 2 == 1) sign = -sign;
          out(p, q) += c(m, n) * sign * std::exp(lmag);
        }
      }
    }
  }
  return out;
}

struct FcOracleInput {
  std::vector<double> omega_initial;
  std::vector<double> omega_final;
  std::vector<double> alpha;
  double theta = 0.0;
};

// Amplitude matrix A(n1, n2) = <n1, n2| D S^dag(zeta') R S(zeta) |0, 0>.
inline Mat fc_amplitudes(const FcOracleInput& in, int dim) {
  const double ref = std::log(in.omega_initial[0]);
  auto zeta = [&](double w) { return 0.5 * (std::log(w) - ref); };
  const Eigen::VectorXcd v1 = squeezed_vacuum(zeta(in.omega_initial[0]), dim);
  const Eigen::VectorXcd v2 = squeezed_vacuum(zeta(in.omega_initial[1]), dim);
  Mat c = v1 * v2.transpose();
  c = rotate(c, in.theta);
  const Mat s1 = squeeze_exp(-zeta(in.omega_final[0]), dim);
  const Mat s2 = squeeze_exp(-zeta(in.omega_final[1]), dim);
  c = s1 * c * s2.transpose();
  const Mat d1 = displace_exp(in.alpha[0], dim);
  const Mat d2 = displace_exp(in.alpha[1], dim);
  return d1 * c * d2.transpose();
}

}  // namespace phonon::testing
