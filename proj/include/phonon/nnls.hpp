// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace phonon {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||_2
  int iterations = 0;
  bool converged = false;
};

// min ||A x - b|| subject to x >= 0 (active-set method of Lawson and Hanson).
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0,
                double tolerance = 0.0);

}  // namespace phonon
