#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tensorrank {

/// Worker cap: `requested` if nonzero, else TRC_THREADS if set and nonzero,
/// else the hardware concurrency.
inline std::size_t worker_count(std::size_t requested = 0) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("TRC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count); indices are claimed in increasing order.
/// If bodies throw, the exception of the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
  const std::size_t workers = std::min(worker_count(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard guard(lock);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tensorrank
