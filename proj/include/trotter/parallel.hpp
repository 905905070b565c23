#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace trotter {

/// Process-wide worker cap (CLI --threads).  0 means hardware concurrency.
void set_thread_cap(int cap);
int effective_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, n).  Outputs must be
/// written to per-index slots so results are identical for any worker
/// count.
inline void parallel_for_chunks(
    std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers =
      std::max(1, std::min<int>(effective_threads(), static_cast<int>(n)));
  if (workers == 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace trotter
