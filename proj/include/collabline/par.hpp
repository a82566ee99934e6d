#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace collabline {

// Deterministic blocked reduction. Items are summed serially within fixed-size
// blocks and block partials are merged in block order, so the floating-point
// result is identical for any thread count.
constexpr size_t kReduceBlock = 8192;

inline size_t num_blocks(size_t n) { return (n + kReduceBlock - 1) / kReduceBlock; }

// Runs fn(block_index, begin, end) over fixed blocks of [0, n) in parallel.
template <typename Fn>
void for_each_block(size_t n, Fn&& fn) {
    const int64_t nb = static_cast<int64_t>(num_blocks(n));
#pragma omp parallel for schedule(static)
    for (int64_t b = 0; b < nb; ++b) {
        size_t begin = static_cast<size_t>(b) * kReduceBlock;
        size_t end = begin + kReduceBlock < n ? begin + kReduceBlock : n;
        fn(static_cast<size_t>(b), begin, end);
    }
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace collabline
