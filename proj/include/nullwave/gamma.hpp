#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/derivs.hpp"
#include "nullwave/fft.hpp"
#include "nullwave/grid.hpp"

namespace nullwave {

// Klainerman vector fields in their canonical order (d, Omega, L, L0).
enum class GammaOp {
    kDt = 0,
    kD1,
    kD2,
    kD3,
    kOmega12,
    kOmega13,
    kOmega23,
    kL1,
    kL2,
    kL3,
    kL0,
};

inline constexpr std::array<GammaOp, 11> kGammaAll = {
    GammaOp::kDt,      GammaOp::kD1,      GammaOp::kD2,      GammaOp::kD3,
    GammaOp::kOmega12, GammaOp::kOmega13, GammaOp::kOmega23, GammaOp::kL1,
    GammaOp::kL2,      GammaOp::kL3,      GammaOp::kL0,
};

inline const char* gamma_name(GammaOp op) {
    static const char* names[] = {"dt",  "d1",  "d2",  "d3", "O12", "O13",
                                  "O23", "L1",  "L2",  "L3", "L0"};
    return names[static_cast<int>(op)];
}

// Rotations, boosts and scaling multiply by coordinates; those weights wrap
// around on the torus, so they are only valid while the state is supported
// inside the box with a margin.
struct SupportMarginError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool needs_coordinates(GammaOp op) { return op >= GammaOp::kOmega12; }

struct SupportPolicy {
    double threshold_rel = 1e-8;  // relative to max(|w|, |v|)
    double margin_cells = 2.0;    // margin in units of h
    double threshold_abs = 0.0;   // if > 0, overrides the relative rule

    void check(const FieldState& s) const {
        const double scale = std::max(s.w.max_abs(), s.v.max_abs());
        if (scale == 0.0) return;
        const double r_sup =
            support_radius(s, threshold_abs > 0.0 ? threshold_abs : threshold_rel * scale);
        const double limit = s.grid().half_width - margin_cells * s.grid().spacing();
        if (r_sup >= limit)
            throw SupportMarginError("support radius " + std::to_string(r_sup) +
                                     " exceeds margin limit " + std::to_string(limit));
    }
};

namespace detail {

// Applies op to a field g with known time derivative gt at time t.
inline ScalarField gamma_of_pair(const ScalarField& g, const ScalarField& gt, double t, GammaOp op) {
    const Grid3& grid = g.grid();
    SpectralOps& ops = spectral_ops(grid);
    ScalarField out(grid);
    const std::size_t n = grid.n;

    auto coord_combine = [&](const ScalarField& fa, const ScalarField& fb, int axis_a, int axis_b,
                             double sign_b) {
        // x_a * fa + sign_b * x_b * fb
        for (std::size_t iz = 0; iz < n; ++iz)
            for (std::size_t iy = 0; iy < n; ++iy)
                for (std::size_t ix = 0; ix < n; ++ix) {
                    const std::size_t i = grid.index(ix, iy, iz);
                    const double xs[3] = {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
                    out[i] = xs[axis_a] * fa[i] + sign_b * xs[axis_b] * fb[i];
                }
    };

    switch (op) {
        case GammaOp::kDt:
            return gt;
        case GammaOp::kD1:
            return ops.derivative(g, 0);
        case GammaOp::kD2:
            return ops.derivative(g, 1);
        case GammaOp::kD3:
            return ops.derivative(g, 2);
        case GammaOp::kOmega12:
            coord_combine(ops.derivative(g, 1), ops.derivative(g, 0), 0, 1, -1.0);
            return out;
        case GammaOp::kOmega13:
            coord_combine(ops.derivative(g, 2), ops.derivative(g, 0), 0, 2, -1.0);
            return out;
        case GammaOp::kOmega23:
            coord_combine(ops.derivative(g, 2), ops.derivative(g, 1), 1, 2, -1.0);
            return out;
        case GammaOp::kL1:
        case GammaOp::kL2:
        case GammaOp::kL3: {
            const int a = static_cast<int>(op) - static_cast<int>(GammaOp::kL1);
            ScalarField da = ops.derivative(g, a);
            for (std::size_t iz = 0; iz < n; ++iz)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t ix = 0; ix < n; ++ix) {
                        const std::size_t i = grid.index(ix, iy, iz);
                        const double xs[3] = {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
                        out[i] = t * da[i] + xs[a] * gt[i];
                    }
            return out;
        }
        case GammaOp::kL0: {
            ScalarField dx = ops.derivative(g, 0);
            ScalarField dy = ops.derivative(g, 1);
            ScalarField dz = ops.derivative(g, 2);
            for (std::size_t iz = 0; iz < n; ++iz)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t ix = 0; ix < n; ++ix) {
                        const std::size_t i = grid.index(ix, iy, iz);
                        out[i] = t * gt[i] + grid.coord(ix) * dx[i] + grid.coord(iy) * dy[i] +
                                 grid.coord(iz) * dz[i];
                    }
            return out;
        }
    }
    throw std::logic_error("gamma_of_pair: bad op");
}

}  // namespace detail

// Gamma w as a grid field.
inline ScalarField apply_gamma(const FieldState& state, GammaOp op,
                               const SupportPolicy& policy = SupportPolicy{}) {
    if (needs_coordinates(op)) policy.check(state);
    return detail::gamma_of_pair(state.w, state.v, state.t, op);
}

// (Gamma w, d_t Gamma w) with the time derivative closed via the equation.
// Enables one further Gamma application (order cap 2).
inline FieldState gamma_state(const FieldState& state, GammaOp op, const JetBundle& jets,
                              const SupportPolicy& policy = SupportPolicy{}) {
    if (needs_coordinates(op)) policy.check(state);
    const Grid3& grid = state.grid();
    ScalarField g = detail::gamma_of_pair(state.w, state.v, state.t, op);
    ScalarField gt(grid);
    const std::size_t n = grid.n;
    const double t = state.t;

    switch (op) {
        case GammaOp::kDt:
            gt = jets.wtt();
            break;
        case GammaOp::kD1:
        case GammaOp::kD2:
        case GammaOp::kD3: {
            const int a = static_cast<int>(op) - static_cast<int>(GammaOp::kD1);
            gt = jets.dv(a);
            break;
        }
        case GammaOp::kOmega12:
        case GammaOp::kOmega13:
        case GammaOp::kOmega23: {
            int a, b;
            if (op == GammaOp::kOmega12) a = 0, b = 1;
            else if (op == GammaOp::kOmega13) a = 0, b = 2;
            else a = 1, b = 2;
            for (std::size_t iz = 0; iz < n; ++iz)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t ix = 0; ix < n; ++ix) {
                        const std::size_t i = grid.index(ix, iy, iz);
                        const double xs[3] = {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
                        gt[i] = xs[a] * jets.dv(b)[i] - xs[b] * jets.dv(a)[i];
                    }
            break;
        }
        case GammaOp::kL1:
        case GammaOp::kL2:
        case GammaOp::kL3: {
            const int a = static_cast<int>(op) - static_cast<int>(GammaOp::kL1);
            // d_t(L_a w) = d_a w + t d_a v + x_a d_t^2 w
            for (std::size_t iz = 0; iz < n; ++iz)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t ix = 0; ix < n; ++ix) {
                        const std::size_t i = grid.index(ix, iy, iz);
                        const double xs[3] = {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
                        gt[i] = jets.dw(a)[i] + t * jets.dv(a)[i] + xs[a] * jets.wtt()[i];
                    }
            break;
        }
        case GammaOp::kL0:
            // d_t(L_0 w) = v + t d_t^2 w + x . grad v
            for (std::size_t iz = 0; iz < n; ++iz)
                for (std::size_t iy = 0; iy < n; ++iy)
                    for (std::size_t ix = 0; ix < n; ++ix) {
                        const std::size_t i = grid.index(ix, iy, iz);
                        gt[i] = state.v[i] + t * jets.wtt()[i] + grid.coord(ix) * jets.dv(0)[i] +
                                grid.coord(iy) * jets.dv(1)[i] + grid.coord(iz) * jets.dv(2)[i];
                    }
            break;
    }
    return FieldState(std::move(g), std::move(gt), t);
}

inline FieldState gamma_state(const FieldState& state, GammaOp op, const Closure& closure,
                              const SupportPolicy& policy = SupportPolicy{}) {
    return gamma_state(state, op, JetBundle(state, closure), policy);
}

// Gamma_outer Gamma_inner w, using the jet closure for the inner time derivative.
inline ScalarField apply_gamma2(const FieldState& state, GammaOp outer, GammaOp inner,
                                const Closure& closure, const SupportPolicy& policy = SupportPolicy{}) {
    FieldState g1 = gamma_state(state, inner, closure, policy);
    if (needs_coordinates(outer)) policy.check(state);  // same support region
    return detail::gamma_of_pair(g1.w, g1.v, state.t, outer);
}

// G_a = omega_a d_t + d_a with omega_a = x_a / max(r, h/2).
inline ScalarField good_derivative(const FieldState& state, int a) {
    const Grid3& grid = state.grid();
    ScalarField da = spectral_ops(grid).derivative(state.w, a);
    ScalarField out(grid);
    const std::size_t n = grid.n;
    const double floor_r = 0.5 * grid.spacing();
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t i = grid.index(ix, iy, iz);
                const double xs[3] = {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
                const double r = std::sqrt(xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2]);
                const double omega_a = xs[a] / std::max(r, floor_r);
                out[i] = omega_a * state.v[i] + da[i];
            }
    return out;
}

}  // namespace nullwave
