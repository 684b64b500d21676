#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mclt {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, count). Each index must write only to its own
// slot of any shared output, which makes the result independent of the
// worker count; reductions are then done sequentially by the caller.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  int w = resolve_workers(workers);
  if (w <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    // Chunked self-scheduling keeps the per-index cost amortized without
    // affecting which slot an index writes to.
    constexpr std::size_t kChunk = 16;
    for (;;) {
      std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      std::size_t end = std::min(begin + kChunk, count);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace mclt
