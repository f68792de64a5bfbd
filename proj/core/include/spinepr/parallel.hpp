#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinepr {

inline unsigned default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

// Run fn(block) for block = 0..n_blocks-1 on up to n_threads workers.
// Blocks are claimed through an atomic counter, so the assignment of blocks to
// threads is arbitrary — callers must write results into per-block slots and
// merge them in block order afterwards.  That convention (not this function)
// is what makes ensemble reductions bit-identical for any thread count.
template <class Fn>
void parallel_blocks(std::size_t n_blocks, unsigned n_threads, Fn&& fn) {
  if (n_blocks == 0) return;
  if (n_threads <= 1 || n_blocks == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const unsigned nw = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_blocks));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (unsigned i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}
