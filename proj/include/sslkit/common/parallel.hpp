// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

namespace sslkit::par {

// Global worker count.  0 or 1 means run inline on the calling thread.
// Resolution order at startup: set_num_threads() > SSLKIT_THREADS env var > 1.
void set_num_threads(int n);
int num_threads();

// Splits [0, n) into one contiguous chunk per worker and runs chunk_fn on
// each.  Chunk boundaries depend only on n and the worker count, and every
// chunk writes disjoint outputs, so results are identical regardless of how
// the OS schedules the workers.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

}  // namespace sslkit::par
