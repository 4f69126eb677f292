#include "gridnav/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace gridnav::parallel {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) { g_threads.store(std::max(1, n), std::memory_order_relaxed); }

int threads() { return g_threads.load(std::memory_order_relaxed); }

void for_rows(int count, const std::function<void(int, int)>& fn) {
  const int t = std::min(threads(), count);
  if (t <= 1 || count <= 1) {
    if (count > 0) fn(0, count);
    return;
  }
  const int chunk = (count + t - 1) / t;
  std::vector<std::thread> workers;
  workers.reserve(t - 1);
  for (int w = 1; w < t; ++w) {
    const int begin = w * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(fn, begin, end);
  }
  fn(0, std::min(count, chunk));
  for (std::thread& th : workers) th.join();
}

}  // namespace gridnav::parallel
