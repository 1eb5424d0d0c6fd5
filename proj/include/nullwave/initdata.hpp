#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/fft.hpp"
#include "nullwave/gamma.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/norms.hpp"

namespace nullwave {

struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smooth localized profiles. width is the Gaussian scale sigma or the bump
// support radius; the bump is C^infty with compact support.
struct DataProfile {
    enum Kind { kZero, kGaussian, kBump } kind = kGaussian;
    double width = 1.0;
    double amplitude = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};

    static DataProfile zero() { return {kZero, 1.0, 0.0, {}}; }
    static DataProfile gaussian(double width, double amplitude = 1.0,
                                std::array<double, 3> center = {}) {
        return {kGaussian, width, amplitude, center};
    }
    static DataProfile bump(double radius, double amplitude = 1.0,
                            std::array<double, 3> center = {}) {
        return {kBump, radius, amplitude, center};
    }
    static DataProfile named(const std::string& name, double width, double amplitude,
                             std::array<double, 3> center = {}) {
        if (name == "zero") return zero();
        if (name == "gaussian") return gaussian(width, amplitude, center);
        if (name == "bump") return bump(width, amplitude, center);
        throw ProfileError("unknown data profile: " + name);
    }

    double operator()(double x, double y, double z) const {
        const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
        const double r2 = dx * dx + dy * dy + dz * dz;
        switch (kind) {
            case kZero:
                return 0.0;
            case kGaussian:
                return amplitude * std::exp(-0.5 * r2 / (width * width));
            case kBump: {
                const double s2 = r2 / (width * width);
                if (s2 >= 1.0) return 0.0;
                return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
            }
        }
        return 0.0;
    }
};

namespace detail {

inline void check_realized_support(const FieldState& s) {
    const Grid3& g = s.grid();
    const double scale = std::max(s.w.max_abs(), s.v.max_abs());
    if (scale == 0.0) return;
    const double limit = g.half_width - 4.0 * g.spacing();
    const double r = support_radius(s, 1e-10 * scale);
    if (r >= limit)
        throw ProfileError("realized data support radius " + std::to_string(r) +
                           " violates r < L - 4h = " + std::to_string(limit));
}

}  // namespace detail

// Samples (w0, w1) profiles on the grid and enforces the support margin.
inline FieldState realize(const Grid3& g, const DataProfile& w0, const DataProfile& w1) {
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    s.w.fill([&](double x, double y, double z) { return w0(x, y, z); });
    s.v.fill([&](double x, double y, double z) { return w1(x, y, z); });
    detail::check_realized_support(s);
    return s;
}

inline double gradient_l2(const ScalarField& f) {
    SpectralOps& ops = spectral_ops(f.grid());
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double nrm = l2_norm(ops.derivative(f, a));
        acc += nrm * nrm;
    }
    return std::sqrt(acc);
}

// The paper's large-data family: F_eps(x) = eps^{3/2} F(eps x), and
//   w0 = (F_eps + eps F) / ||grad(F_eps + eps F)||_{L2}
//   w1 = (G_eps + eps G) / ||G_eps + eps G||_{L2}.
inline FieldState make_large_data(const Grid3& g, const DataProfile& F, const DataProfile& G,
                                  double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ProfileError("make_large_data: eps must lie in (0, 1]");
    const double width = std::max(F.width, G.width);
    if (width / eps > g.half_width / 4.0)
        throw ProfileError("make_large_data: rescaled width " + std::to_string(width / eps) +
                           " exceeds L/4; profile not resolvable at eps = " + std::to_string(eps));

    const double scale = std::pow(eps, 1.5);
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    s.w.fill([&](double x, double y, double z) {
        return scale * F(eps * x, eps * y, eps * z) + eps * F(x, y, z);
    });
    s.v.fill([&](double x, double y, double z) {
        return scale * G(eps * x, eps * y, eps * z) + eps * G(x, y, z);
    });
    detail::check_realized_support(s);

    const double nw = gradient_l2(s.w);
    const double nv = l2_norm(s.v);
    if (nw == 0.0 || nv == 0.0) throw ProfileError("make_large_data: degenerate (zero) profile");
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.w[i] /= nw;
        s.v[i] /= nv;
    }
    return s;
}

struct InitialNorms {
    double K_value = 0.0;     // (1.3)-style weighted energy sum
    double eps_value = 0.0;   // (1.4)-style one-extra-derivative sum
    double conf_value = 0.0;  // (1.9)-style conformal data sum
    double w0_l2 = 0.0;       // reported, not constrained
};

namespace detail {

// <x>^p weighted norm evaluated gridwise.
inline double bracket_norm(const ScalarField& f, int p, NormKind kind) {
    const Grid3& g = f.grid();
    ScalarField wf(g);
    const std::size_t n = g.n;
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
                const double r = std::sqrt(x * x + y * y + z * z);
                wf[i] = std::pow(japanese_bracket(r), p) * f[i];
            }
    return weighted_norm(wf, Weight::none(), kind);
}

inline ScalarField multi_derivative(const ScalarField& f, const std::array<int, 3>& idx) {
    SpectralOps& ops = spectral_ops(f.grid());
    ScalarField out = f;
    for (int a = 0; a < 3; ++a)
        for (int rep = 0; rep < idx[a]; ++rep) out = ops.derivative(out, a);
    return out;
}

inline std::vector<std::array<int, 3>> multi_indices(int order) {
    std::vector<std::array<int, 3>> out;
    for (int i = order; i >= 0; --i)
        for (int j = order - i; j >= 0; --j) out.push_back({i, j, order - i - j});
    return out;
}

// |grad f| as a grid field.
inline ScalarField gradient_magnitude(const ScalarField& f) {
    const Grid3& g = f.grid();
    SpectralOps& ops = spectral_ops(g);
    ScalarField out(g);
    for (int a = 0; a < 3; ++a) {
        ScalarField d = ops.derivative(f, a);
        for (std::size_t i = 0; i < g.size(); ++i) out[i] += d[i] * d[i];
    }
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::sqrt(out[i]);
    return out;
}

// Frobenius magnitude of the Hessian, mixed entries counted twice.
inline ScalarField hessian_magnitude(const ScalarField& f) {
    const Grid3& g = f.grid();
    SpectralOps& ops = spectral_ops(g);
    ScalarField out(g);
    for (int a = 0; a < 3; ++a) {
        ScalarField da = ops.derivative(f, a);
        for (int b = a; b < 3; ++b) {
            ScalarField dab = ops.derivative(da, b);
            const double mult = (a == b) ? 1.0 : 2.0;
            for (std::size_t i = 0; i < g.size(); ++i) out[i] += mult * dab[i] * dab[i];
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::sqrt(out[i]);
    return out;
}

}  // namespace detail

// Weighted initial-data norm sums with the derivative order capped at n_ord.
// grad^I runs over multi-indices; the outer gradients are taken as pointwise
// vector magnitudes before the norm.
inline InitialNorms weighted_initial_norms(const FieldState& s, int n_ord = 2,
                                           const SupportPolicy& policy = SupportPolicy{}) {
    if (n_ord < 0 || n_ord > 2)
        throw std::invalid_argument("weighted_initial_norms: n_ord must lie in [0, 2]");
    policy.check(s);

    InitialNorms out;
    out.w0_l2 = l2_norm(s.w);
    for (int k = 0; k <= n_ord; ++k) {
        for (const auto& idx : detail::multi_indices(k)) {
            ScalarField d0 = detail::multi_derivative(s.w, idx);
            ScalarField d1 = detail::multi_derivative(s.v, idx);
            ScalarField g0 = detail::gradient_magnitude(d0);

            out.K_value += detail::bracket_norm(g0, k, NormKind::L2);
            out.K_value += detail::bracket_norm(d1, k, NormKind::L2);

            out.conf_value += detail::bracket_norm(d0, k, NormKind::L2);
            if (k <= n_ord - 1) {
                out.eps_value += detail::bracket_norm(detail::hessian_magnitude(d0), k, NormKind::L2);
                out.eps_value += detail::bracket_norm(detail::gradient_magnitude(d1), k, NormKind::L2);

                out.conf_value += detail::bracket_norm(d1, k + 1, NormKind::L2);
                out.conf_value += detail::bracket_norm(d1, k, NormKind::L1);
                if (k >= 1) out.conf_value += detail::bracket_norm(g0, k, NormKind::L1);
            }
        }
    }
    return out;
}

}  // namespace nullwave
