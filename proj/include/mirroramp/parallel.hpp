#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mirroramp {

// Worker count from MIRRORAMP_WORKERS, else hardware concurrency.
int default_workers();

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is visited once; callers
// write into disjoint preallocated slots, so results do not depend on the worker count.
// Per-worker state is created by make_state() inside each thread.
template <class MakeState, class Body>
void parallel_for_with_state(std::size_t n, int workers, MakeState make_state, Body body) {
  if (n == 0) return;
  const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(workers < 1 ? 1 : workers, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    try {
      auto state = make_state();
      for (std::size_t i = next++; i < n; i = next++) body(state, i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  if (threads == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

template <class Body>
void parallel_for(std::size_t n, int workers, Body body) {
  parallel_for_with_state(n, workers, [] { return 0; }, [&](int&, std::size_t i) { body(i); });
}

}  // namespace mirroramp
