#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stoparea::detail {

// Runs fn(i) for every i in [0, n), splitting the range into fixed-size chunks
// that worker threads claim from an atomic counter.  Callers must write results
// into preallocated slots indexed by i so the output is identical regardless of
// the thread count.  Falls back to a plain loop on single-core hosts.
template <class Fn>
void parallel_for(std::size_t n, std::size_t chunk, Fn&& fn) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::size_t n_threads = hw < n_chunks ? hw : n_chunks;
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks || failed.load()) return;
      const std::size_t lo = c * chunk;
      const std::size_t hi = lo + chunk < n ? lo + chunk : n;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stoparea::detail
