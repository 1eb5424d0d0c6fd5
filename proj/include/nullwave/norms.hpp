#pragma once

#include <cmath>
#include <stdexcept>

#include "nullwave/grid.hpp"
#include "nullwave/reduction.hpp"

namespace nullwave {

inline double japanese_bracket(double rho) { return std::sqrt(1.0 + rho * rho); }

// Pointwise weight applied to the field before taking the norm.
//   none:         1
//   bracket(p,q): <t+r>^p <t-r>^q
//   ghost(delta): <r-t>^{-(1+2 delta)/2}, so the squared L2 norm is the
//                 ghost flux density integral of f^2 / <r-t>^{1+2 delta}.
struct Weight {
    enum Kind { kNone, kBracket, kGhost } kind = kNone;
    double p = 0.0;
    double q = 0.0;
    double delta = 0.0;

    static Weight none() { return {}; }
    static Weight bracket(double p, double q) { return {kBracket, p, q, 0.0}; }
    static Weight ghost(double delta) { return {kGhost, 0.0, 0.0, delta}; }

    double operator()(double r, double t) const {
        switch (kind) {
            case kNone:
                return 1.0;
            case kBracket:
                return std::pow(japanese_bracket(t + r), p) * std::pow(japanese_bracket(t - r), q);
            case kGhost:
                return std::pow(japanese_bracket(r - t), -0.5 * (1.0 + 2.0 * delta));
        }
        return 1.0;
    }
};

enum class NormKind { L1, L2, Linf };

template <class F>
double weighted_norm_of(const Grid3& g, F&& value_at, const Weight& w, NormKind kind, double t) {
    const std::size_t n = g.n;
    auto weighted = [&](std::size_t i) {
        const std::size_t ix = i % n;
        const std::size_t iy = (i / n) % n;
        const std::size_t iz = i / (n * n);
        const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
        const double r = std::sqrt(x * x + y * y + z * z);
        return w(r, t) * value_at(i);
    };
    switch (kind) {
        case NormKind::L1:
            return g.cell_volume() *
                   pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) { return std::abs(weighted(i)); });
        case NormKind::L2:
            return std::sqrt(g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
                                 const double v = weighted(i);
                                 return v * v;
                             }));
        case NormKind::Linf: {
            double m = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(weighted(i)));
            return m;
        }
    }
    throw std::logic_error("weighted_norm_of: bad kind");
}

inline double weighted_norm(const ScalarField& f, const Weight& w, NormKind kind, double t = 0.0) {
    return weighted_norm_of(f.grid(), [&f](std::size_t i) { return f[i]; }, w, kind, t);
}

inline double l1_norm(const ScalarField& f) { return weighted_norm(f, Weight::none(), NormKind::L1); }
inline double l2_norm(const ScalarField& f) { return weighted_norm(f, Weight::none(), NormKind::L2); }
inline double linf_norm(const ScalarField& f) { return weighted_norm(f, Weight::none(), NormKind::Linf); }

}  // namespace nullwave
