#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace nhssh {

/// Default worker count: NHSSH_WORKERS if set, else hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("NHSSH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

/// Runs body(0..n-1) on up to `workers` threads. Work items must be
/// independent; callers assign results by index, so output ordering does not
/// depend on scheduling. The first exception thrown by any item is rethrown
/// after all threads stop.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  if (n == 0) return;
  const std::size_t w = std::min<std::size_t>(std::max(1u, workers), n);
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto drain = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nhssh
