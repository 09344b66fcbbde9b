// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run, list, describe.

#pragma once

#include <ostream>
#include <string>

#include "phonon/config.hpp"

namespace phonon {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;  // I/O failures and anything unexpected
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

std::string version_string();

// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);

// The config document hashed into summaries: the effective config without output_dir.
Json provenance_config(const ExperimentConfig& c);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phonon
