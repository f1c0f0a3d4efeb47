#pragma once

#include "symvp/space.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace symvp {

using Rng = std::mt19937_64;

/// Worker threads used by blockReduce.  1 disables threading.
void setThreadCount(int k);
int threadCount();

Vector uniformBox(Rng& rng, int dim, double radius);
Vector gaussianDirection(Rng& rng, int dim);

/// Deterministic parallel reduction: indices are processed in fixed-size
/// blocks, block partials are folded in block order, so the result does not
/// depend on the number of worker threads.
template <class T, class PerIndex, class Fold>
T blockReduce(std::size_t count, T init, PerIndex&& perIndex, Fold&& fold) {
  constexpr std::size_t kBlock = 256;
  if (count == 0) return init;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<T> partial(blocks, init);
  auto runBlock = [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(count, lo + kBlock);
    T acc = init;
    for (std::size_t i = lo; i < hi; ++i) acc = fold(acc, perIndex(i));
    partial[b] = acc;
  };
  const int workers = threadCount();
  if (workers <= 1 || blocks == 1) {
    for (std::size_t b = 0; b < blocks; ++b) runBlock(b);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) runBlock(b);
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(workers, blocks);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  T acc = init;
  for (std::size_t b = 0; b < blocks; ++b) acc = fold(acc, partial[b]);
  return acc;
}

}  // namespace symvp
