#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "mdu/types.hpp"

namespace mdu {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(begin, end) over a static contiguous partition of [0, n).
/// Each index is processed exactly once by exactly one thread, so writes to
/// per-index slots need no synchronization and results do not depend on the
/// thread count.
template <class Fn>
void parallel_chunks(Index n, int threads, Fn&& fn) {
  threads = std::min<Index>(resolve_threads(threads), std::max<Index>(n, 1));
  if (threads <= 1) {
    fn(Index{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    Index begin = n * t / threads;
    Index end = n * (t + 1) / threads;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mdu
