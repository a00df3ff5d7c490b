#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mcf {

/// Runs fn(task) for task in [0, n_tasks) on up to `threads` workers. Tasks must write only
/// to their own output slot; the first exception (lowest task index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n_tasks, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n_tasks <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_task = n_tasks;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (t < err_task) {
          err_task = t;
          err = std::current_exception();
        }
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(threads, n_tasks);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace mcf
