#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace matool {

/// Worker count: MATOOL_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Evaluates f(0..n-1) on a worker pool; results in index order. The first exception
/// (lowest index) is rethrown after all workers finish.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back(work);
    for (auto& th : pool)
      th.join();
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

} // namespace matool
