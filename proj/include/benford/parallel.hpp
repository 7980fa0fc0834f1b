#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace benford {

/// Runs fn(begin, end) over [0, n) split into contiguous blocks, one per
/// worker.  Blocks are fixed by (n, threads) alone, so callers that write
/// only to their own block produce identical results for any thread count.
template <class Fn>
void parallel_for_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
}

/// fn(i) for each i in [0, n).
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  parallel_for_blocks(n, threads, [&fn](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace benford
