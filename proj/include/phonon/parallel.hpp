// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "phonon/hilbert.hpp"

namespace phonon {

// Worker count from PHONON_SIM_THREADS (default 1, clamped to >= 1).
int thread_count();

// Calls fn(i) for i in [0, n) across thread_count() workers. Callers write to
// slot i of a preallocated output so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Generator for trajectory `index` of a run seeded with `master`.
Rng trajectory_rng(std::uint64_t master, std::uint64_t index);

}  // namespace phonon
