#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace lowtail {

/// Number of worker threads for a request; 0 or negative means one per core.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// results[i] = f(i) for i in [0, count), computed on `workers` threads.
///
/// Results are stored by index, so the output never depends on scheduling.
/// If several calls throw, the exception of the lowest index is rethrown.
template <class F>
auto parallel_map(std::size_t count, int workers, F&& f)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  const auto body = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::atomic<std::size_t> next{0};
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count);
  if (threads <= 1) {
    body(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back([&] { body(next); });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace lowtail
