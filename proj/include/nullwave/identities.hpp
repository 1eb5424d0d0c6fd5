#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "nullwave/derivs.hpp"
#include "nullwave/fft.hpp"
#include "nullwave/gamma.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/jet.hpp"
#include "nullwave/tensor.hpp"

namespace nullwave {

// Seeded band-limited interior state: a Gaussian envelope (sigma = L/8, so
// boundary values sit at ~1e-14 relative) times a random trig polynomial
// with per-axis mode numbers up to max_mode.
inline FieldState random_interior_state(const Grid3& g, unsigned long seed, int max_mode = 8,
                                        double amplitude = 1.0, double t = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> mode(-max_mode, max_mode);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    const double dk = g.dk();
    const double sigma = g.half_width / 8.0;

    struct ModeTerm {
        double a, kx, ky, kz, phi;
    };
    auto draw_terms = [&] {
        std::vector<ModeTerm> terms(6);
        for (auto& m : terms)
            m = {unif(rng), dk * mode(rng), dk * mode(rng), dk * mode(rng), phase(rng)};
        return terms;
    };
    const auto wt = draw_terms();
    const auto vt = draw_terms();

    FieldState s{ScalarField(g), ScalarField(g), t};
    auto fill = [&](ScalarField& f, const std::vector<ModeTerm>& terms) {
        f.fill([&](double x, double y, double z) {
            const double env = std::exp(-0.5 * (x * x + y * y + z * z) / (sigma * sigma));
            double acc = 0.0;
            for (const auto& m : terms) acc += m.a * std::cos(m.kx * x + m.ky * y + m.kz * z + m.phi);
            return amplitude * env * acc;
        });
    };
    fill(s.w, wt);
    fill(s.v, vt);
    return s;
}

struct IdentityCheck {
    std::string name;
    double residual = 0.0;  // relative to the larger side's sup
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

inline double relative_residual(const ScalarField& lhs, const ScalarField& rhs) {
    double num = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) num = std::max(num, std::abs(lhs[i] - rhs[i]));
    const double scale = std::max({lhs.max_abs(), rhs.max_abs(), 1e-30});
    return num / scale;
}

}  // namespace detail

// The five identities from the Lemma 2.2 proof, checked gridwise on one
// state. All derivatives are spectral; residuals are rounding-limited.
inline std::vector<IdentityCheck> lemma22_residuals(const FieldState& s, double tol = 1e-8) {
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    const double t = s.t;
    const SupportPolicy policy{};

    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    auto gam = [&](GammaOp op) { return detail::gamma_of_pair(s.w, s.v, t, op); };
    ScalarField L0 = gam(GammaOp::kL0);
    std::array<ScalarField, 3> L = {gam(GammaOp::kL1), gam(GammaOp::kL2), gam(GammaOp::kL3)};
    ScalarField O12 = gam(GammaOp::kOmega12), O13 = gam(GammaOp::kOmega13), O23 = gam(GammaOp::kOmega23);
    policy.check(s);

    auto coords = [&](std::size_t i) {
        const std::size_t n = g.n;
        const std::size_t ix = i % n, iy = (i / n) % n, iz = i / (n * n);
        return std::array<double, 3>{g.coord(ix), g.coord(iy), g.coord(iz)};
    };

    std::vector<IdentityCheck> out;
    auto push = [&](const std::string& name, const ScalarField& lhs, const ScalarField& rhs) {
        const double r = detail::relative_residual(lhs, rhs);
        out.push_back({name, r, tol, r <= tol});
    };

    ScalarField lhs(g), rhs(g);
    // (t^2 - r^2) dt u = t L0 u - x^a L_a u
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = coords(i);
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        lhs[i] = (t * t - r2) * s.v[i];
        rhs[i] = t * L0[i] - x[0] * L[0][i] - x[1] * L[1][i] - x[2] * L[2][i];
    }
    push("lemma2.2/dt", lhs, rhs);

    // (t^2 - r^2) d_a u = t L_a u - x_a L0 u +- x_b Omega_ab u
    const ScalarField* omegas[3][3] = {{nullptr, &O12, &O13}, {&O12, nullptr, &O23}, {&O13, &O23, nullptr}};
    const double sgn[3][3] = {{0, 1, 1}, {-1, 0, 1}, {-1, -1, 0}};
    for (int a = 0; a < 3; ++a) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto x = coords(i);
            const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            lhs[i] = (t * t - r2) * dw[a][i];
            double acc = t * L[a][i] - x[a] * L0[i];
            for (int b = 0; b < 3; ++b)
                if (b != a) acc += sgn[a][b] * x[b] * (*omegas[a][b])[i];
            rhs[i] = acc;
        }
        push("lemma2.2/d" + std::to_string(a + 1), lhs, rhs);
    }

    // r G_a u = L_a u + (r - t) d_a u  (summed over a in magnitude)
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = coords(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        double l = 0.0, rr = 0.0;
        for (int a = 0; a < 3; ++a) {
            l += x[a] * s.v[i] + r * dw[a][i];
            rr += L[a][i] + (r - t) * dw[a][i];
        }
        lhs[i] = l;
        rhs[i] = rr;
    }
    push("lemma2.2/good", lhs, rhs);
    return out;
}

// First-order commutators [d_alpha, Gamma] against their exact table,
// closed through d_t^2 w = lap w (free closure keeps both sides consistent).
inline std::vector<IdentityCheck> lemma21_residuals(const FieldState& s, double tol = 1e-8) {
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    const double t = s.t;
    const JetBundle jets(s, Closure::free());
    const SupportPolicy policy{};
    policy.check(s);

    std::array<ScalarField, 3> dw, dv;
    for (int a = 0; a < 3; ++a) {
        dw[a] = ops.derivative(s.w, a);
        dv[a] = ops.derivative(s.v, a);
    }
    const ScalarField& wtt = jets.wtt();

    // first-derivative pairs (field, its time derivative)
    auto deriv_pair = [&](int alpha) -> std::pair<const ScalarField&, const ScalarField&> {
        if (alpha == 0) return {s.v, wtt};
        return {dw[alpha - 1], dv[alpha - 1]};
    };

    // exact commutator [d_alpha, op] u as a field
    auto expected = [&](int alpha, GammaOp op) -> ScalarField {
        ScalarField c(g);
        auto add = [&](const ScalarField& f, double coef) {
            for (std::size_t i = 0; i < g.size(); ++i) c[i] += coef * f[i];
        };
        if (op >= GammaOp::kOmega12 && op <= GammaOp::kOmega23) {
            int a, b;
            if (op == GammaOp::kOmega12) a = 1, b = 2;
            else if (op == GammaOp::kOmega13) a = 1, b = 3;
            else a = 2, b = 3;
            if (alpha == a) add(dw[b - 1], 1.0);
            if (alpha == b) add(dw[a - 1], -1.0);
        } else if (op >= GammaOp::kL1 && op <= GammaOp::kL3) {
            const int a = static_cast<int>(op) - static_cast<int>(GammaOp::kL1) + 1;
            if (alpha == 0) add(dw[a - 1], 1.0);
            if (alpha == a) add(s.v, 1.0);
        } else if (op == GammaOp::kL0) {
            if (alpha == 0) add(s.v, 1.0);
            else add(dw[alpha - 1], 1.0);
        }
        return c;  // translations commute
    };

    std::vector<IdentityCheck> out;
    ScalarField lhs(g);
    for (GammaOp op : {GammaOp::kOmega12, GammaOp::kOmega13, GammaOp::kOmega23, GammaOp::kL1,
                       GammaOp::kL2, GammaOp::kL3, GammaOp::kL0}) {
        const FieldState gs = gamma_state(s, op, jets, policy);
        for (int alpha = 0; alpha < 4; ++alpha) {
            if (alpha == 0) {
                lhs = gs.v;  // d_t (Gamma u)
            } else {
                lhs = ops.derivative(gs.w, alpha - 1);
            }
            const auto [f, ft] = deriv_pair(alpha);
            ScalarField rhs = detail::gamma_of_pair(f, ft, t, op);
            const ScalarField c = expected(alpha, op);
            for (std::size_t i = 0; i < g.size(); ++i) rhs[i] += c[i];
            const double r = detail::relative_residual(lhs, rhs);
            const std::string name =
                std::string("lemma2.1/[d") + std::to_string(alpha) + "," + gamma_name(op) + "]";
            out.push_back({name, r, tol, r <= tol});
        }
    }
    return out;
}

struct NullBoundReport {
    std::size_t checks = 0;
    std::size_t violations = 0;
    double max_decomp_residual = 0.0;
    double max_slack = 0.0;  // largest |Q_P| / bound ratio observed
};

// Lemma 2.3 battery: pointwise |Q_P| <= C(omega)(|Gu||ddv| + |du||Gdv|) on
// random jets over sphere directions, plus the decomposition residual.
inline NullBoundReport null_form_bound_battery(const NullFormTensor& p, std::size_t n_dirs,
                                               std::size_t jets_per_dir, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    NullBoundReport rep;

    const auto all_dirs = null_validation_directions();
    const std::size_t stride = std::max<std::size_t>(1, all_dirs.size() / n_dirs);
    for (std::size_t d = 0; d < all_dirs.size() && rep.checks < n_dirs * jets_per_dir; d += stride) {
        const auto& omega = all_dirs[d];
        const DecompositionReport dec = good_decomposition(p, omega);
        rep.max_decomp_residual = std::max(rep.max_decomp_residual, std::abs(dec.residual));
        for (std::size_t j = 0; j < jets_per_dir; ++j) {
            Jet u, v;
            for (auto& x : u.d1) x = unif(rng);
            for (auto& x : u.d2) x = unif(rng);
            for (auto& x : v.d1) x = unif(rng);
            for (auto& x : v.d2) x = unif(rng);
            const double qp = evaluate_qp(p, u, v);
            const double bound =
                dec.c_omega * (good_first_max(omega, u) * second_deriv_max(v) +
                               first_deriv_max(u) * good_second_max(omega, v)) +
                std::abs(dec.residual) * std::abs(u.d1[0] * v.d2[0]);
            ++rep.checks;
            const double slack = std::abs(qp) / std::max(bound, 1e-300);
            rep.max_slack = std::max(rep.max_slack, slack);
            if (std::abs(qp) > bound * (1.0 + 1e-12)) ++rep.violations;
        }
    }
    return rep;
}

// Full identity suite over seeded states; used by the identity-suite
// subcommand and the acceptance tests.
inline std::vector<IdentityCheck> run_identity_suite(std::size_t n = 64, double half_width = 16.0,
                                                     std::size_t states = 10,
                                                     unsigned long base_seed = 1000,
                                                     double tol = 1e-8) {
    const Grid3 g(n, half_width);
    std::vector<IdentityCheck> out;
    for (std::size_t k = 0; k < states; ++k) {
        const FieldState s = random_interior_state(g, base_seed + k);
        for (auto& c : lemma22_residuals(s, tol)) {
            c.name += "@s" + std::to_string(k);
            out.push_back(std::move(c));
        }
        for (auto& c : lemma21_residuals(s, tol)) {
            c.name += "@s" + std::to_string(k);
            out.push_back(std::move(c));
        }
    }
    // Lemma 2.3 on three certified-null tensors
    const std::array<std::array<double, 4>, 3> cs = {
        {{1.0, 0.0, 0.0, 0.0}, {0.3, -0.7, 0.2, 0.5}, {-0.4, 0.1, 0.9, -0.2}}};
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto rep = null_form_bound_battery(NullFormTensor::mc_family(cs[k]), 64, 1000,
                                                 base_seed + 77 + k);
        const bool ok = rep.violations == 0 && rep.max_decomp_residual <= 1e-12;
        out.push_back({"lemma2.3/tensor" + std::to_string(k),
                       std::max(rep.max_decomp_residual, rep.violations ? 1.0 : 0.0), 1e-12, ok});
    }
    return out;
}

}  // namespace nullwave
