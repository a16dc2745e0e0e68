#ifndef MCSIG_PARALLEL_HPP
#define MCSIG_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "mcsig/types.hpp"

namespace mcsig {

// Worker count: MCSIG_THREADS when set, otherwise the hardware concurrency.
inline Index worker_count() {
  if (const char* env = std::getenv("MCSIG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<Index>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<Index>(hw);
}

// Runs fn(i) for i in [0, n) across a small thread pool. Each call must
// write only to its own output slot; seeds and reduction order are keyed by
// the index, so scheduling cannot change any result. The first exception
// wins and is rethrown on the calling thread.
inline void parallel_for(Index n, const std::function<void(Index)>& fn) {
  const Index workers = std::min<Index>(n, worker_count());
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }

  std::mutex mutex;
  std::exception_ptr first_error;
  Index next = 0;
  auto worker = [&] {
    for (;;) {
      Index i;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (next >= n || first_error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (Index w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mcsig

#endif
