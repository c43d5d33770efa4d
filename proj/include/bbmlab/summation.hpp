#pragma once

#include <cstddef>
#include <span>

namespace bbm {

// Sums term(i) for i in [lo, hi) by recursive halving. Blocks below 256 terms
// are accumulated directly.
template <class T, class Term>
T pairwise_sum(Term&& term, std::ptrdiff_t lo, std::ptrdiff_t hi) {
  constexpr std::ptrdiff_t kBlock = 256;
  if (hi - lo <= kBlock) {
    T acc{};
    for (std::ptrdiff_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::ptrdiff_t mid = lo + (hi - lo) / 2;
  return pairwise_sum<T>(term, lo, mid) + pairwise_sum<T>(term, mid, hi);
}

template <class T>
T pairwise_sum(std::span<const T> values) {
  return pairwise_sum<T>([&](std::ptrdiff_t i) { return values[static_cast<std::size_t>(i)]; },
                         0, static_cast<std::ptrdiff_t>(values.size()));
}

}  // namespace bbm
