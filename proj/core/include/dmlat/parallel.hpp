#ifndef DMLAT_PARALLEL_HPP
#define DMLAT_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dmlat {

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency() threads, pulling
/// indices from a shared atomic counter (work items here are very uneven, so
/// dynamic scheduling matters). The first exception thrown by any worker is
/// rethrown on the caller's thread.
template <typename Fn>
void parallel_for(uint64_t n, Fn&& fn) {
  unsigned nt = std::thread::hardware_concurrency();
  if (nt == 0) nt = 1;
  if (n < 2 || nt == 1) {
    for (uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(n, std::memory_order_relaxed);  // drain remaining work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace dmlat

#endif
