#pragma once
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mflab {

// Runs f(i) for i in [0, n). Each index owns its output slot, so results are
// deterministic regardless of scheduling.
template <typename F>
void parallel_for(int n, F&& f) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (n == 1 || hw <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mflab
