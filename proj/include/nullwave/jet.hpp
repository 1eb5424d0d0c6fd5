#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nullwave {

// Symmetric second-derivative storage order: tt, t1, t2, t3, 11, 12, 13, 22, 23, 33.
constexpr std::size_t sym_index(std::size_t alpha, std::size_t beta) {
    constexpr std::size_t table[4][4] = {
        {0, 1, 2, 3},
        {1, 4, 5, 6},
        {2, 5, 7, 8},
        {3, 6, 8, 9},
    };
    return table[alpha][beta];
}

// Pointwise first and second derivatives of a field. Time derivatives are
// closed via the evolution equation by the code that builds the jet.
struct Jet {
    std::array<double, 4> d1{};   // dt, d1, d2, d3
    std::array<double, 10> d2{};  // symmetric, see sym_index

    double first(std::size_t alpha) const { return d1[alpha]; }
    double second(std::size_t alpha, std::size_t beta) const { return d2[sym_index(alpha, beta)]; }

    bool finite() const {
        for (double x : d1)
            if (!std::isfinite(x)) return false;
        for (double x : d2)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

}  // namespace nullwave
