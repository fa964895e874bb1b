#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace qsim {

/// Worker cap: min(hardware_concurrency, QSIM_THREADS). Affects speed only;
/// every reduction in the library is ordered so results do not depend on it.
unsigned max_threads();

namespace detail {

constexpr uint64_t kReduceLeaf = 1024;

inline uint64_t lower_power_of_two(uint64_t len) {
  uint64_t p = 1;
  while (p * 2 < len) p *= 2;
  return p;
}

}  // namespace detail

/// Fixed-shape pairwise reduction over [begin, end). The split points depend
/// only on the index range, never on thread count or rank layout, so a sum
/// over a 2^n-long array equals the rank-wise partial sums combined with
/// combine_partials() bit-for-bit.
template <typename T, typename F>
T pairwise_sum(uint64_t begin, uint64_t end, F&& f) {
  uint64_t len = end - begin;
  if (len == 0) return T{};
  if (len <= detail::kReduceLeaf) {
    T acc{};
    for (uint64_t i = begin; i < end; ++i) acc += f(i);
    return acc;
  }
  uint64_t mid = begin + detail::lower_power_of_two(len);
  return pairwise_sum<T>(begin, mid, f) + pairwise_sum<T>(mid, end, f);
}

/// Same tree applied to a list of partial sums (one per rank or chunk).
template <typename T>
T combine_partials(const std::vector<T>& parts) {
  return pairwise_sum<T>(0, parts.size(), [&](uint64_t i) { return parts[i]; });
}

/// Threaded variant: top levels of the same tree are evaluated concurrently,
/// leaves sequentially; identical result to the serial call.
template <typename T, typename F>
T parallel_pairwise_sum(uint64_t begin, uint64_t end, F&& f, unsigned depth = 0) {
  uint64_t len = end - begin;
  if (len <= (uint64_t{1} << 18) || depth >= 3 || max_threads() < 2)
    return pairwise_sum<T>(begin, end, f);
  uint64_t mid = begin + detail::lower_power_of_two(len);
  T right{};
  std::thread worker([&] { right = parallel_pairwise_sum<T>(mid, end, f, depth + 1); });
  T left = parallel_pairwise_sum<T>(begin, mid, f, depth + 1);
  worker.join();
  return left + right;
}

/// Runs body(i) for i in [0, count) on up to max_threads() workers.
/// Work items must be independent; completion order is unspecified.
void parallel_for(uint64_t count, const std::function<void(uint64_t)>& body,
                  unsigned workers = 0);

}  // namespace qsim
