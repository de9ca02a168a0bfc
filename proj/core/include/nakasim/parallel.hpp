#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nakasim {

/// Worker count from NAKASIM_WORKERS, else hardware concurrency, at least 1.
unsigned default_workers();

/// out[i] = fn(i) for i in [0, count), on up to `workers` threads. Results
/// land by index, so the output is independent of scheduling. The first
/// exception thrown by fn is rethrown.
template <class R, class Fn>
std::vector<R> parallel_map(std::uint64_t count, unsigned workers, Fn&& fn) {
  std::vector<R> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace nakasim
