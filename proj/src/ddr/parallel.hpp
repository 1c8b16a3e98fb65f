// Minimal deterministic parallel loop.

#ifndef DDR_PARALLEL_HPP
#define DDR_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ddr {

/// Runs f(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once and results must be written to per-index slots, so
/// the outcome does not depend on the worker count. The first exception thrown
/// by any worker is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
  std::size_t nw = static_cast<std::size_t>(std::max(1, threads));
  nw = std::min(nw, std::max<std::size_t>(n, 1));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < n; i += nw) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace ddr

#endif
