#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace pinzero {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : (int)n;
}

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// worker.  MPFR values must not be shared mutably across chunks.
inline void parallel_for(long n, int threads, const std::function<void(long, long)>& fn) {
  if (threads <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  threads = (int)std::min<long>(threads, n);
  std::vector<std::thread> pool;
  long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pinzero
