// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "phonon/cli.hpp"

int main(int argc, char** argv) { return phonon::run_cli(argc, argv, std::cout, std::cerr); }
