#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace causticlab {

/// Runs fn(i) for i in [0, n) on up to `workers` threads.  Callers write
/// results into slot i, so the merged output does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto count = std::min(threads, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace causticlab
