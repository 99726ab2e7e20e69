#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rdwb {

// Process-wide cap on worker threads (the CLI's --workers flag).
inline std::atomic<int>& worker_limit() {
  static std::atomic<int> limit{0};
  return limit;
}

inline int effective_workers() {
  const int limit = worker_limit().load();
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return limit > 0 ? limit : hw;
}

// Runs body(i) for i in [0, n). Indices are handed out in increasing order;
// callers that need a deterministic result must write into per-index slots.
// The first exception thrown by any body is rethrown on the caller's thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, int workers = 0) {
  if (workers <= 0) workers = effective_workers();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rdwb
