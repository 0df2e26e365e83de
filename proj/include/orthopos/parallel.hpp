#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace orthopos {

inline unsigned effective_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Static-stride parallel map over [0, count). Results must be written to
/// per-index slots so assembly is order-independent. `thread_init` runs once
/// in each worker before any body call (working precision is thread-local).
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body,
                         unsigned threads = 0,
                         const std::function<void()>& thread_init = {}) {
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(effective_threads(threads),
                                                  count == 0 ? 1 : count));
  if (count == 0) return;
  if (n_threads <= 1) {
    if (thread_init) thread_init();
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        if (thread_init) thread_init();
        for (std::size_t i = w; i < count; i += n_threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace orthopos
