#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace tsnn {

// Static contiguous partition of [0, n) over `threads` workers. Results must
// be reduced by the caller in worker order: partitioning is deterministic, so
// the same (n, threads) pair always yields the same slices.
inline void parallel_for(int n, int threads,
                         const std::function<void(int worker, int begin, int end)>& fn) {
  if (threads <= 1 || n <= 1) {
    fn(0, 0, n);
    return;
  }
  if (threads > n) threads = n;
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, t, begin, end);
  }
  fn(0, 0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace tsnn
