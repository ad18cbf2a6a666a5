#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace gapn {

/// Dynamic queue over [0, count); workers pop indices in increasing order.
class WorkQueue {
 public:
  explicit WorkQueue(std::uint64_t count) : count_(count) {}

  std::optional<std::uint64_t> pop() noexcept {
    std::uint64_t i = next_.fetch_add(1, std::memory_order_relaxed);
    if (i >= count_) return std::nullopt;
    return i;
  }

 private:
  std::uint64_t count_;
  std::atomic<std::uint64_t> next_{0};
};

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(worker) on `jobs` threads (inline when jobs == 1) and rethrows the
/// first exception any worker raised.
template <typename Fn>
void run_workers(unsigned jobs, Fn&& fn) {
  jobs = resolve_jobs(jobs);
  if (jobs == 1) {
    fn(0u);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gapn
