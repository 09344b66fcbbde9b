// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// The experiment registry behind the command-line runner: one schema and one
// procedure per kind, each producing metrics, built-in checks and CSV tables.

#pragma once

#include <string>
#include <vector>

#include "phonon/config.hpp"

namespace phonon {

struct Table {
  std::string name;                  // file stem
  std::vector<std::string> columns;  // "name[unit]"
  std::vector<std::vector<double>> rows;
};

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<" , "<=", ">", ">=" or "=="
  double limit = 0.0;
  bool pass = false;
};

struct ResultBundle {
  Json metrics = Json::object();
  std::vector<Check> checks;
  std::vector<Table> tables;

  void check(const std::string& name, double value, const std::string& relation, double limit);
  bool all_pass() const;
};

const std::vector<KindSchema>& experiment_registry();

// Runs a validated config. Library exceptions propagate unchanged.
ResultBundle run_experiment(const ExperimentConfig& config);

// Header line, then one row per line; numbers in shortest round-trip form.
std::string format_csv(const Table& table);

}  // namespace phonon
