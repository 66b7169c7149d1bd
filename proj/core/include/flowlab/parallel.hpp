#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace flowlab {

/// Runs body(i) for i in [0, n). Each index is processed exactly once; results
/// must be written to disjoint slots so the outcome is independent of
/// scheduling and worker count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace flowlab
