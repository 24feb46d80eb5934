#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace precs {

/// Number of terms summed sequentially per block in deterministic_sum.
inline constexpr std::size_t kReductionBlock = 512;

/// Pairwise sum of `values` in a fixed tree order.
template <class T>
T pairwise_sum(std::vector<T> values, const T& zero) {
  if (values.empty()) return zero;
  while (values.size() > 1) {
    const std::size_t half = (values.size() + 1) / 2;
    for (std::size_t i = 0; i < values.size() / 2; ++i) {
      values[i] = values[2 * i] + values[2 * i + 1];
    }
    if (values.size() % 2 == 1) values[half - 1] = values.back();
    values.resize(half);
  }
  return values.front();
}

/// Sum of term(i) for i in [0, n). Terms are grouped into fixed-size blocks
/// summed in index order, and the block totals are combined pairwise. The
/// block layout does not depend on the thread count, so the result is
/// bit-identical for any OpenMP team size.
template <class T, class Term>
T deterministic_sum(std::size_t n, const T& zero, Term term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<T> partial(blocks, zero);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    T acc = zero;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  return pairwise_sum(std::move(partial), zero);
}

}  // namespace precs
