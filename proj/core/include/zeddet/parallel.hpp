#ifndef ZEDDET_PARALLEL_HPP
#define ZEDDET_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace zeddet {

/// Static block partition of [0, n) over `workers` threads. Each index is
/// processed exactly once; callers that need deterministic aggregates should
/// write into per-index slots and reduce in index order afterwards.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace zeddet

#endif
