#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace varlp {

// Runs body(i) for i in [0, count) on a small thread pool. Each index is
// handled exactly once, so results written by index are deterministic. The
// first exception thrown by any body is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned max_threads = 0) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (max_threads) hw = std::min(hw, max_threads);
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex guard;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace varlp
