#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nprg {

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. Items are claimed
/// in index order; the first exception is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t extra = jobs > 1 ? std::min<std::size_t>(static_cast<std::size_t>(jobs) - 1, count) : 0;
    for (std::size_t w = 0; w < extra; ++w) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace nprg
