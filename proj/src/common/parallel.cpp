// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/common/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sslkit::par {

namespace {

int g_threads = [] {
  if (const char* env = std::getenv("SSLKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}();

}  // namespace

void set_num_threads(int n) { g_threads = n < 1 ? 1 : n; }

int num_threads() { return g_threads; }

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
  if (n <= 0) return;
  const int workers = g_threads;
  if (workers <= 1 || n == 1) {
    chunk_fn(0, n);
    return;
  }
  const std::int64_t chunks = std::min<std::int64_t>(workers, n);
  const std::int64_t base = n / chunks;
  const std::int64_t rem = n % chunks;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks) - 1);
  std::int64_t begin = 0;
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t len = base + (c < rem ? 1 : 0);
    const std::int64_t end = begin + len;
    if (c + 1 == chunks) {
      chunk_fn(begin, end);
    } else {
      pool.emplace_back([&chunk_fn, begin, end] { chunk_fn(begin, end); });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace sslkit::par
