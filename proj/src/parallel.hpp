#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nmzi::detail {

/// Calls fn(i) for i in [0, n) over contiguous chunks on up to
/// hardware_concurrency threads. fn must only touch per-index state. The
/// first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex m;
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!first) first = std::current_exception();
      }
    });
  }
  pool.clear();
  if (first) std::rethrow_exception(first);
}

}  // namespace nmzi::detail
