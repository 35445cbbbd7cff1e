#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace divsum {

// Process-wide worker cap used by every internally parallel routine.
// Results never depend on it: work is split into a fixed number of chunks
// decided by the caller, and partial results are reduced in chunk order.
void set_thread_count(unsigned n);
unsigned thread_count();

// Evaluates fn(i) for i in [0, n_chunks) on up to thread_count() workers and
// returns the results indexed by chunk. The first exception thrown by any
// chunk is rethrown on the calling thread.
template <typename Fn>
auto parallel_chunks(std::size_t n_chunks, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(n_chunks);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), n_chunks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n_chunks; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n_chunks;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace divsum
