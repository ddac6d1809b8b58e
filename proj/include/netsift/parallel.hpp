#pragma once

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "netsift/errors.hpp"

namespace netsift {

/// Worker count for trial fan-out. NETSIFT_WORKERS overrides the hardware
/// default; it only affects speed, never results.
inline int worker_count() {
  if (const char* env = std::getenv("NETSIFT_WORKERS")) {
    int value = 0;
    const std::string text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || value < 1) {
      throw config_error("NETSIFT_WORKERS must be a positive integer");
    }
    return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(0..count-1) across workers. Trial bodies must be pure given their
/// index; callers aggregate stored per-trial results in index order, so the
/// outcome is identical to a sequential run. If trials throw, the exception
/// with the smallest observed trial index is rethrown.
template <typename Fn>
void parallel_trials(int count, Fn&& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int t = 0; t < count; ++t) {
      fn(t);
    }
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int t = next.fetch_add(1);
        if (t >= count) break;
        try {
          fn(t);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace netsift
