// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace phonon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dimensions, out-of-range slots, malformed parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Population reached the top of a truncated Fock space.
class LeakageError : public Error {
 public:
  LeakageError(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_;
};

// Step control, fixed-point iteration, or a solver gave up.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace phonon
