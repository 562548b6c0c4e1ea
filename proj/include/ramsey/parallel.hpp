#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ramsey {

// Splits [begin, end) into `workers` contiguous chunks and runs fn(w, lo, hi)
// on each, chunk 0 on the calling thread. Callers combine per-chunk results
// in chunk order, which keeps outcomes independent of the worker count.
inline void parallel_chunks(std::uint64_t begin, std::uint64_t end, unsigned workers,
                            const std::function<void(unsigned, std::uint64_t,
                                                     std::uint64_t)>& fn) {
  if (workers < 1) workers = 1;
  std::uint64_t total = end > begin ? end - begin : 0;
  if (total == 0) return;
  if (workers > total) workers = static_cast<unsigned>(total);
  if (workers == 1) {
    fn(0, begin, end);
    return;
  }
  std::uint64_t chunk = total / workers;
  std::uint64_t rem = total % workers;
  std::vector<std::uint64_t> bounds(workers + 1, begin);
  for (unsigned w = 0; w < workers; ++w)
    bounds[w + 1] = bounds[w] + chunk + (w < rem ? 1 : 0);

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w)
    threads.emplace_back(fn, w, bounds[w], bounds[w + 1]);
  fn(0, bounds[0], bounds[1]);
  for (auto& t : threads) t.join();
}

}  // namespace ramsey
