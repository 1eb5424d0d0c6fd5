#pragma once

#include <cstddef>

namespace nullwave {

// Fixed-shape pairwise summation. The reduction tree depends only on the
// element count, so results are bit-identical run to run and the rounding
// error grows like O(log n) instead of O(n).
template <class F>
double pairwise_map_sum(std::size_t begin, std::size_t end, F&& f) {
    const std::size_t n = end - begin;
    if (n <= 64) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_map_sum(begin, mid, f) + pairwise_map_sum(mid, end, f);
}

inline double pairwise_sum(const double* data, std::size_t n) {
    return pairwise_map_sum(std::size_t{0}, n, [data](std::size_t i) { return data[i]; });
}

}  // namespace nullwave
