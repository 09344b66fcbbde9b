// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "phonon/errors.hpp"

namespace phonon {

namespace {

// Least squares restricted to the passive columns; other entries are zero.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  if (cols.empty()) return Eigen::VectorXd::Zero(a.cols());
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) out[cols[k]] = z[static_cast<Eigen::Index>(k)];
  return out;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations,
                double tolerance) {
  if (a.rows() != b.size()) throw InvalidArgument("nnls: row count of A differs from length of b");
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  if (tolerance <= 0) {
    tolerance = 10.0 * std::numeric_limits<double>::epsilon() * a.norm() *
                static_cast<double>(std::max(a.rows(), n));
  }

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = a.transpose() * (b - a * res.x);

  while (res.iterations < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) {
      res.converged = true;
      break;
    }
    passive[best] = true;
    ++res.iterations;

    // Inner loop: step back toward feasibility when the passive solution goes negative.
    for (Eigen::Index guard = 0; guard <= n; ++guard) {
      Eigen::VectorXd z = passive_solve(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0) feasible = false;
      }
      if (feasible) {
        res.x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0) alpha = std::min(alpha, res.x[j] / (res.x[j] - z[j]));
      }
      res.x += alpha * (z - res.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && std::abs(res.x[j]) <= tolerance) {
          passive[j] = false;
          res.x[j] = 0.0;
        }
      }
    }
    w = a.transpose() * (b - a * res.x);
  }
  res.residual = (a * res.x - b).norm();
  return res;
}

}  // namespace phonon
