#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fhop {

// Run fn(0..n-1) across `width` workers (<= 1 or n == small runs inline).
// The first exception is rethrown after all workers drain.
template <typename Fn>
void parallel_for(std::size_t n, int width, Fn&& fn) {
  if (width <= 0) width = static_cast<int>(std::thread::hardware_concurrency());
  if (width <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  const int count = static_cast<int>(std::min<std::size_t>(width, n));
  threads.reserve(count);
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fhop
