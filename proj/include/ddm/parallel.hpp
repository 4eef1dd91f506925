#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ddm {

// Worker count from DDM_THREADS, else the hardware concurrency (at least 1).
unsigned thread_count();

// Runs f(i) for i in [0, n) on thread_count() threads, contiguous blocks per
// thread. f must only write state owned by index i, which keeps results
// independent of the thread count. The first exception thrown is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = n * w / threads;
    const std::size_t hi = n * (w + 1) / threads;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Pairwise (cascade) summation in a fixed tree order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace ddm
