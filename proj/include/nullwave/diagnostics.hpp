#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/derivs.hpp"
#include "nullwave/fft.hpp"
#include "nullwave/gamma.hpp"
#include "nullwave/ghost.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/norms.hpp"
#include "nullwave/propagator.hpp"
#include "nullwave/reduction.hpp"

namespace nullwave {

namespace detail {

inline double radius_at(const Grid3& g, std::size_t i) {
    const std::size_t n = g.n;
    const double x = g.coord(i % n);
    const double y = g.coord((i / n) % n);
    const double z = g.coord(i / (n * n));
    return std::sqrt(x * x + y * y + z * z);
}

}  // namespace detail

// Natural energy int v^2 + |grad w|^2.
inline double natural_energy(const FieldState& s) {
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    return g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
               return s.v[i] * s.v[i] + dw[0][i] * dw[0][i] + dw[1][i] * dw[1][i] + dw[2][i] * dw[2][i];
           });
}

// Ghost-weighted energy density int e^{q(r-t)} (v^2 + |grad w|^2).
inline double ghost_density(const FieldState& s, const GhostWeight& gw) {
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    return g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
               const double r = detail::radius_at(g, i);
               return gw.exp_q(r - s.t) *
                      (s.v[i] * s.v[i] + dw[0][i] * dw[0][i] + dw[1][i] * dw[1][i] + dw[2][i] * dw[2][i]);
           });
}

// Instantaneous ghost flux rate sum_a int e^q |G_a w|^2 / <r-t>^{1+2 delta} dx.
// This is the exact partner of ghost_density: d/dt density + rate = 2 int e^q f v.
inline double ghost_flux_rate(const FieldState& s, const GhostWeight& gw) {
    const Grid3& g = s.grid();
    std::array<ScalarField, 3> gdw;
    for (int a = 0; a < 3; ++a) gdw[a] = good_derivative(s, a);
    return g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
               const double r = detail::radius_at(g, i);
               const double wgt = gw.exp_q(r - s.t) *
                                  std::pow(japanese_bracket(r - s.t), -1.0 - 2.0 * gw.delta());
               return wgt * (gdw[0][i] * gdw[0][i] + gdw[1][i] * gdw[1][i] + gdw[2][i] * gdw[2][i]);
           });
}

// E_gst = weighted density + accumulated flux (the caller owns the trapezoid
// accumulation). Conserved along free flows, monotone info split otherwise.
inline double ghost_energy(const FieldState& s, const GhostWeight& gw, double flux_acc) {
    return ghost_density(s, gw) + flux_acc;
}

struct ConformalEnergies {
    double e_con = 0.0;    // (L0 w)^2 + w^2 + |Omega w|^2 + |L w|^2
    double e_tilde = 0.0;  // (L0 w + 2w)^2 + |Omega w|^2 + |L w|^2
};

inline ConformalEnergies conformal_energy(const FieldState& s,
                                          const SupportPolicy& policy = SupportPolicy{}) {
    policy.check(s);
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    const double t = s.t;
    const std::size_t n = g.n;

    double con = 0.0, til = 0.0;
    con = g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
        const double xs[3] = {g.coord(i % n), g.coord((i / n) % n), g.coord(i / (n * n))};
        const double l0 = t * s.v[i] + xs[0] * dw[0][i] + xs[1] * dw[1][i] + xs[2] * dw[2][i];
        const double o12 = xs[0] * dw[1][i] - xs[1] * dw[0][i];
        const double o13 = xs[0] * dw[2][i] - xs[2] * dw[0][i];
        const double o23 = xs[1] * dw[2][i] - xs[2] * dw[1][i];
        double acc = l0 * l0 + s.w[i] * s.w[i] + o12 * o12 + o13 * o13 + o23 * o23;
        for (int a = 0; a < 3; ++a) {
            const double la = t * dw[a][i] + xs[a] * s.v[i];
            acc += la * la;
        }
        return acc;
    });
    til = g.cell_volume() * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
        const double xs[3] = {g.coord(i % n), g.coord((i / n) % n), g.coord(i / (n * n))};
        const double l0 = t * s.v[i] + xs[0] * dw[0][i] + xs[1] * dw[1][i] + xs[2] * dw[2][i];
        const double m = l0 + 2.0 * s.w[i];
        const double o12 = xs[0] * dw[1][i] - xs[1] * dw[0][i];
        const double o13 = xs[0] * dw[2][i] - xs[2] * dw[0][i];
        const double o23 = xs[1] * dw[2][i] - xs[2] * dw[1][i];
        double acc = m * m + o12 * o12 + o13 * o13 + o23 * o23;
        for (int a = 0; a < 3; ++a) {
            const double la = t * dw[a][i] + xs[a] * s.v[i];
            acc += la * la;
        }
        return acc;
    });
    return {con, til};
}

struct SupRecord {
    double sup_w_weighted = 0.0;        // <t+r><t-r>^{1/2} |w|
    double sup_dw_weighted = 0.0;       // <t+r><t-r>^{1/2} |dw|
    double sup_dw_weighted_sharp = 0.0; // <t+r><t-r>^{3/2} |dw|
    double sup_dw_raw = 0.0;            // |dw|, with |dw|^2 = v^2 + |grad w|^2
};

inline SupRecord weighted_sup_tracker(const FieldState& s, const SupportPolicy& policy = SupportPolicy{}) {
    policy.check(s);
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    SupRecord rec;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = detail::radius_at(g, i);
        const double wp = japanese_bracket(s.t + r);
        const double wm = std::sqrt(japanese_bracket(s.t - r));
        const double ad = std::sqrt(s.v[i] * s.v[i] + dw[0][i] * dw[0][i] + dw[1][i] * dw[1][i] +
                                    dw[2][i] * dw[2][i]);
        rec.sup_w_weighted = std::max(rec.sup_w_weighted, wp * wm * std::abs(s.w[i]));
        rec.sup_dw_weighted = std::max(rec.sup_dw_weighted, wp * wm * ad);
        rec.sup_dw_weighted_sharp = std::max(rec.sup_dw_weighted_sharp, wp * wm * wm * wm * ad);
        rec.sup_dw_raw = std::max(rec.sup_dw_raw, ad);
    }
    return rec;
}

// Klainerman-Sobolev ratio:
//   sup <t+r><t-r>^{1/2}|w| / sum_{|I|<=2} ||Gamma^I w||_{L2}.
// Second-order compositions are generated in the fixed order
// outer <= inner over the canonical Gamma list.
inline std::optional<double> ks_ratio(const FieldState& s, const Closure& closure,
                                      const SupportPolicy& policy = SupportPolicy{}) {
    policy.check(s);
    double denom = l2_norm(s.w);
    JetBundle jets(s, closure);
    for (GammaOp inner : kGammaAll) {
        FieldState g1 = gamma_state(s, inner, jets, policy);
        denom += l2_norm(g1.w);
        for (GammaOp outer : kGammaAll) {
            if (static_cast<int>(outer) > static_cast<int>(inner)) break;
            denom += l2_norm(detail::gamma_of_pair(g1.w, g1.v, s.t, outer));
        }
    }
    if (denom < 1e3 * std::numeric_limits<double>::min()) return std::nullopt;
    const double sup = weighted_sup_tracker(s, policy).sup_w_weighted;
    return sup / denom;
}

// One snapshot of everything the Lemma 2.6 identity residuals need.
struct IdentitySample {
    double t = 0.0;
    double ghost_density = 0.0;   // int e^q |dw|^2
    double ghost_flux_q = 0.0;    // int e^q sum |G_a w|^2 / <r-t>^{1+2d}
    double ghost_source = 0.0;    // 2 int f e^q dt w
    double e_tilde = 0.0;
    double conf_source = 0.0;     // 2 int f (M0 w + 2 t w)
};

/// f: full forcing -box w (null field pointer means f == 0).
inline IdentitySample identity_sample(const FieldState& s, const ScalarField* f, const GhostWeight& gw,
                                      const SupportPolicy& policy = SupportPolicy{}) {
    const Grid3& g = s.grid();
    SpectralOps& ops = spectral_ops(g);
    std::array<ScalarField, 3> dw;
    for (int a = 0; a < 3; ++a) dw[a] = ops.derivative(s.w, a);
    std::array<ScalarField, 3> gdw;
    for (int a = 0; a < 3; ++a) gdw[a] = good_derivative(s, a);

    IdentitySample out;
    out.t = s.t;
    const double vol = g.cell_volume();
    out.ghost_density = vol * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
        const double r = detail::radius_at(g, i);
        const double eq = gw.exp_q(r - s.t);
        return eq * (s.v[i] * s.v[i] + dw[0][i] * dw[0][i] + dw[1][i] * dw[1][i] + dw[2][i] * dw[2][i]);
    });
    out.ghost_flux_q = vol * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
        const double r = detail::radius_at(g, i);
        const double eq = gw.exp_q(r - s.t);
        const double wgt = std::pow(japanese_bracket(r - s.t), -1.0 - 2.0 * gw.delta());
        return eq * wgt * (gdw[0][i] * gdw[0][i] + gdw[1][i] * gdw[1][i] + gdw[2][i] * gdw[2][i]);
    });
    out.e_tilde = conformal_energy(s, policy).e_tilde;
    if (f) {
        const std::size_t n = g.n;
        out.ghost_source = 2.0 * vol * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
            const double r = detail::radius_at(g, i);
            return (*f)[i] * gw.exp_q(r - s.t) * s.v[i];
        });
        out.conf_source = 2.0 * vol * pairwise_map_sum(std::size_t{0}, g.size(), [&](std::size_t i) {
            const double xs[3] = {g.coord(i % n), g.coord((i / n) % n), g.coord(i / (n * n))};
            const double l0 = s.t * s.v[i] + xs[0] * dw[0][i] + xs[1] * dw[1][i] + xs[2] * dw[2][i];
            double xl = 0.0;
            for (int a = 0; a < 3; ++a) xl += xs[a] * (s.t * dw[a][i] + xs[a] * s.v[i]);
            // M0 w + 2 t w = t (L0 w + 2 w) + x^a L_a w
            return (*f)[i] * (s.t * (l0 + 2.0 * s.w[i]) + xl);
        });
    }
    return out;
}

// Composite Simpson over uniformly spaced samples; trapezoid on a trailing
// odd interval.
inline double integrate_series(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("integrate_series: bad input");
    double acc = 0.0;
    std::size_t i = 0;
    while (i + 2 < t.size()) {
        const double h = t[i + 1] - t[i];
        acc += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
    }
    if (i + 1 < t.size()) acc += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
    return acc;
}

struct IdentityResiduals {
    double ghost = 0.0;
    double conformal = 0.0;
};

// Residuals of the integrated ghost and conformal identities over a window of
// samples, normalized per unit time and by each identity's own energy scale
// (max ghost density resp. max e_tilde over the window).
inline IdentityResiduals identity_residuals(const std::vector<IdentitySample>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("identity_residuals: need >= 2 samples");
    std::vector<double> ts, flux, gsrc, csrc;
    double scale_g = 0.0, scale_c = 0.0;
    for (const auto& s : samples) {
        ts.push_back(s.t);
        flux.push_back(s.ghost_flux_q);
        gsrc.push_back(s.ghost_source);
        csrc.push_back(s.conf_source);
        scale_g = std::max(scale_g, s.ghost_density);
        scale_c = std::max(scale_c, s.e_tilde);
    }
    const double span = samples.back().t - samples.front().t;
    const double tnorm = span > 0.0 ? span : 1.0;
    IdentityResiduals res;
    res.ghost = std::abs(samples.back().ghost_density - samples.front().ghost_density +
                         integrate_series(ts, flux) - integrate_series(ts, gsrc)) /
                ((scale_g > 0.0 ? scale_g : 1.0) * tnorm);
    res.conformal = std::abs(samples.back().e_tilde - samples.front().e_tilde -
                             integrate_series(ts, csrc)) /
                    ((scale_c > 0.0 ? scale_c : 1.0) * tnorm);
    return res;
}

struct DecayFit {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double exponent = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::size_t samples = 0;
};

// Least-squares slope of log(y) vs log(t) over the window.
inline DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                          double t_hi) {
    std::vector<double> lt, ly;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_lo && t[i] <= t_hi && t[i] > 0.0 && y[i] > 0.0) {
            lt.push_back(std::log(t[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lt.size() < 8) throw std::invalid_argument("decay_fit: need >= 8 samples in window, have " +
                                                   std::to_string(lt.size()));
    const double n = static_cast<double>(lt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        sx += lt[i];
        sy += ly[i];
        sxx += lt[i] * lt[i];
        sxy += lt[i] * ly[i];
    }
    DecayFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.samples = lt.size();
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.exponent * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        const double e = ly[i] - (fit.intercept + fit.exponent * lt[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

// One sample for the Lemma 2.7 style L2 bound check.
struct L2Sample {
    double t = 0.0;
    double l2_w = 0.0;
    double l1_f = 0.0;
    double l2_f = 0.0;
};

struct L2BoundResult {
    std::vector<double> t;
    std::vector<double> ratio;
    double max_ratio = 0.0;
};

// ratio(t) = ||w(t)|| / (||w0|| + ||w1||_{L1 cap L2} + int_0^t <s>^{-eta/2}||f||_1 + <s>^eta ||f||_2 ds)
inline L2BoundResult l2_bound_check(const std::vector<L2Sample>& samples, double eta, double w0_l2,
                                    double w1_l1, double w1_l2) {
    L2BoundResult out;
    const double base = w0_l2 + w1_l1 + w1_l2;
    double integral = 0.0;
    auto integrand = [eta](const L2Sample& s) {
        return std::pow(japanese_bracket(s.t), -0.5 * eta) * s.l1_f +
               std::pow(japanese_bracket(s.t), eta) * s.l2_f;
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0)
            integral += 0.5 * (samples[i].t - samples[i - 1].t) *
                        (integrand(samples[i]) + integrand(samples[i - 1]));
        const double denom = std::max(base + integral, 1e3 * std::numeric_limits<double>::min());
        const double r = samples[i].l2_w / denom;
        out.t.push_back(samples[i].t);
        out.ratio.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

struct ScatteringConvergence {
    std::vector<double> t_pairs;      // right endpoint of each consecutive pair
    std::vector<double> differences;  // Hdot1 x L2 distance of consecutive pullbacks
    bool strictly_decreasing = false;
};

inline ScatteringConvergence scattering_convergence(const std::vector<double>& ts,
                                                    const std::vector<ScatterData>& pullbacks) {
    if (ts.size() != pullbacks.size() || ts.size() < 3)
        throw std::invalid_argument("scattering_convergence: need >= 3 checkpoints");
    ScatteringConvergence out;
    for (std::size_t i = 0; i + 1 < pullbacks.size(); ++i) {
        out.t_pairs.push_back(ts[i + 1]);
        out.differences.push_back(energy_distance(pullbacks[i], pullbacks[i + 1]));
    }
    out.strictly_decreasing = true;
    for (std::size_t i = 0; i + 1 < out.differences.size(); ++i)
        if (!(out.differences[i + 1] < out.differences[i])) out.strictly_decreasing = false;
    return out;
}

}  // namespace nullwave
