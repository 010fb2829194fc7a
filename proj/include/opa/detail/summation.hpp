#pragma once

#include <cstddef>
#include <algorithm>
#include <span>
#include <vector>

namespace opa::detail {

// Pairwise (cascade) summation. The split points depend only on the length,
// so the result is bitwise reproducible for a given input.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// Mean of f(i) for i in [0, n) with pairwise reduction.
template <class T, class F>
T pairwise_mean(std::size_t n, F&& f) {
  constexpr std::size_t kBlock = 32;
  if (n == 0) return T{};
  // Partial sums over fixed-size blocks, then a pairwise sum of the blocks.
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  T stack_buf[64];
  std::vector<T> heap;
  T* partial = stack_buf;
  if (blocks > 64) {
    heap.resize(blocks);
    partial = heap.data();
  }
  for (std::size_t b = 0; b < blocks; ++b) {
    T acc{};
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) acc += f(i);
    partial[b] = acc;
  }
  return pairwise_sum(std::span<const T>(partial, blocks)) / static_cast<double>(n);
}

}  // namespace opa::detail
