#pragma once

#include <cmath>
#include <complex>

#include "nullwave/fft.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/norms.hpp"

namespace nullwave {

// sin(x)/x, series below |x| < 1e-4 to avoid cancellation.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Candidate scattering data (the free-wave pullback of a state).
struct ScatterData {
    ScalarField u0;
    ScalarField u1;
};

namespace detail {

inline double mode_magnitude(const SpectralOps& ops, std::size_t mx, std::size_t iy, std::size_t iz) {
    const double kx = ops.wavenumber(static_cast<long>(mx));
    const double ky = ops.wavenumber(ops.mode(iy));
    const double kz = ops.wavenumber(ops.mode(iz));
    return std::sqrt(kx * kx + ky * ky + kz * kz);
}

}  // namespace detail

// Exact free-wave group S_W(dt) applied per mode:
//   w <- cos(dt|k|) w + dt sinc(dt|k|) v
//   v <- -|k| sin(dt|k|) w + cos(dt|k|) v
// The k = 0 mode takes the limit w <- w + dt v. Any sign of dt is allowed.
inline FieldState free_evolve(const FieldState& state, double dt) {
    const Grid3& g = state.grid();
    SpectralOps& ops = spectral_ops(g);
    SpectralField ws = ops.forward(state.w);
    SpectralField vs = ops.forward(state.v);

    const std::size_t n = g.n;
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t mx = 0; mx <= n / 2; ++mx) {
                const std::size_t i = ws.index(mx, iy, iz);
                const double k = detail::mode_magnitude(ops, mx, iy, iz);
                const double c = std::cos(dt * k);
                const double s = std::sin(dt * k);
                const std::complex<double> w0 = ws.c[i];
                const std::complex<double> v0 = vs.c[i];
                ws.c[i] = c * w0 + dt * sinc(dt * k) * v0;
                vs.c[i] = -k * s * w0 + c * v0;
            }

    return FieldState(ops.backward(ws), ops.backward(vs), state.t + dt);
}

// Free step plus the midpoint-rule Duhamel increment. f_mid must be the
// forcing sampled at the step midpoint t + dt/2.
inline FieldState duhamel_step(const FieldState& state, const ScalarField& f_mid, double dt) {
    FieldState out = free_evolve(state, dt);
    const Grid3& g = state.grid();
    SpectralOps& ops = spectral_ops(g);
    SpectralField fs = ops.forward(f_mid);
    SpectralField dw(g), dv(g);

    const std::size_t n = g.n;
    const double half = 0.5 * dt;
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t mx = 0; mx <= n / 2; ++mx) {
                const std::size_t i = fs.index(mx, iy, iz);
                const double k = detail::mode_magnitude(ops, mx, iy, iz);
                dw.c[i] = dt * half * sinc(half * k) * fs.c[i];
                dv.c[i] = dt * std::cos(half * k) * fs.c[i];
            }
    ScalarField w_inc = ops.backward(dw);
    ScalarField v_inc = ops.backward(dv);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.w[i] += w_inc[i];
        out.v[i] += v_inc[i];
    }
    return out;
}

// S_W(-t)(w, v): free evolution of the result by +t reproduces the state.
inline ScatterData scattering_pullback(const FieldState& state) {
    FieldState back = free_evolve(state, -state.t);
    return ScatterData{std::move(back.w), std::move(back.v)};
}

// Hdot^1 x L^2 distance between two states (or scatter data pairs).
inline double energy_distance(const ScalarField& w1, const ScalarField& v1, const ScalarField& w2,
                              const ScalarField& v2) {
    const Grid3& g = w1.grid();
    SpectralOps& ops = spectral_ops(g);
    ScalarField dw(g), dv(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        dw[i] = w1[i] - w2[i];
        dv[i] = v1[i] - v2[i];
    }
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
        ScalarField d = ops.derivative(dw, a);
        const double nrm = l2_norm(d);
        acc += nrm * nrm;
    }
    const double nv = l2_norm(dv);
    return std::sqrt(acc + nv * nv);
}

inline double energy_distance(const FieldState& a, const FieldState& b) {
    return energy_distance(a.w, a.v, b.w, b.v);
}

inline double energy_distance(const ScatterData& a, const ScatterData& b) {
    return energy_distance(a.u0, a.u1, b.u0, b.u1);
}

}  // namespace nullwave
