#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ohmlab {

/// Upper bound on worker threads, initialized from OHMLAB_THREADS on first
/// use. set_max_threads(0) resets it to the hardware concurrency.
std::size_t max_threads();
void set_max_threads(std::size_t threads);

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker, so callers writing into slot i of a preallocated buffer and
/// reducing afterwards get results independent of the thread count.
/// Nested calls run sequentially on the calling worker.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  std::size_t workers = detail::in_parallel_region ? 1 : std::min(max_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      detail::in_parallel_region = true;
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

}  // namespace ohmlab
