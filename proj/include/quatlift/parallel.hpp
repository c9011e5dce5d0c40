#pragma once

// Index-parallel loops with deterministic results: every task writes to
// its own slot, and the first exception (lowest index) is rethrown.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace quatlift {

namespace detail {
inline unsigned& thread_setting() {
  static unsigned value = 0;
  return value;
}
}  // namespace detail

/// 0 restores the default (QUATLIFT_THREADS, else hardware concurrency).
inline void set_thread_count(unsigned n) { detail::thread_setting() = n; }

inline unsigned thread_count() {
  if (detail::thread_setting() != 0) return detail::thread_setting();
  if (const char* env = std::getenv("QUATLIFT_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const unsigned threads = std::min<std::size_t>(thread_count(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace quatlift
