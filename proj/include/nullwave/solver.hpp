#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/derivs.hpp"
#include "nullwave/diagnostics.hpp"
#include "nullwave/fft.hpp"
#include "nullwave/gamma.hpp"
#include "nullwave/ghost.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/propagator.hpp"
#include "nullwave/tensor.hpp"

namespace nullwave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit codes shared by run() and the command line tool.
enum RunStatus : int {
    kRunOk = 0,
    kRunMarginAbort = 2,
    kRunNanAbort = 3,
    kRunConfigError = 4,
};

struct RunConfig {
    std::size_t n = 64;
    double half_width = 16.0;

    std::string tensor_name = "mc-family";  // preset name or @path/to/file
    double delta = 1.0 / 24.0;
    bool q0_enabled = true;
    bool dealias = true;

    double cfl = 0.5;
    double t_end = 8.0;
    long snapshot_every = 0;      // steps between snapshots; 0 disables
    long diagnostics_every = 10;  // steps between diagnostic rows
    unsigned long seed = 0;
    std::string mode = "nonlinear";  // nonlinear | free

    std::string data_kind = "gaussian";  // gaussian | bump | large-family | zero
    double data_width = 1.0;
    double data_amplitude = 1.0;
    std::array<double, 3> data_center{0.0, 0.0, 0.0};
    double data_epsilon = 1.0;

    double eta = 2.0 / 3.0;
    std::vector<double> checkpoints;  // scattering pullback times
    bool track_ks = true;

    double support_threshold_rel = 1e-8;
    double support_margin_cells = 2.0;

    std::string output_dir;

    Grid3 grid() const { return Grid3(n, half_width); }
    double dt() const { return cfl * 2.0 * half_width / static_cast<double>(n); }

    NullFormTensor resolve_tensor() const {
        if (!tensor_name.empty() && tensor_name.front() == '@')
            return load_tensor_file(tensor_name.substr(1));
        return NullFormTensor::preset(tensor_name);
    }

    SupportPolicy support_policy() const { return {support_threshold_rel, support_margin_cells}; }

    void validate() const {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ConfigError("grid.n must be a power of two >= 8, got " + std::to_string(n));
        if (!(half_width > 0.0)) throw ConfigError("grid.half_width must be positive");
        if (!(delta > 0.0 && delta < 1.0 / 12.0))
            throw ConfigError("physics.delta = " + std::to_string(delta) +
                              " outside the admissible range (0, 1/12)");
        if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("time.cfl must lie in (0, 1]");
        if (!(t_end >= 0.0)) throw ConfigError("time.t_end must be nonnegative");
        if (mode != "nonlinear" && mode != "free") throw ConfigError("run.mode must be nonlinear or free");
        try {
            resolve_tensor();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("physics.tensor: ") + e.what());
        }
    }
};

// Optional time-dependent source added to the d_t^2 w equation (for
// manufactured-solution runs).
using SourceFn = std::function<void(double t, ScalarField& out)>;

struct RhsOptions {
    bool dealias = true;
    bool q0 = true;
    SourceFn source;  // empty = no source
};

struct Rhs {
    ScalarField dw;
    ScalarField dv;
    ScalarField lap;  // spectral Laplacian of w, kept for forcing extraction
    double margin = 1.0;
};

// First-order reduction of the quasilinear equation: dw = v and
//   dv = [lap w + Q_P terms excluding (alpha,beta)=(0,0) + Q_0 + source]
//        / (1 - P^{g00} d_g w).
// With dealiasing on, the derivative factors entering products and the
// assembled quadratic terms are filtered by the 2/3 rule; the linear part is
// left untouched.
inline Rhs compute_rhs(const FieldState& state, const NullFormTensor& P, const RhsOptions& opts = {}) {
    const Grid3& g = state.grid();
    SpectralOps& ops = spectral_ops(g);
    const std::size_t total = g.size();

    SpectralField ws = ops.forward(state.w);
    SpectralField vs = ops.forward(state.v);

    Rhs out;
    out.dw = state.v;
    {
        SpectralField lap = ws;
        ops.laplacian_spec(lap);
        out.lap = ops.backward(lap);
    }

    const bool trivial = P.is_zero() && !opts.q0;
    if (trivial && !opts.source) {
        out.dv = out.lap;
        return out;
    }

    SpectralField wsf = ws, vsf = vs;
    if (opts.dealias) {
        ops.dealias_spec(wsf);
        ops.dealias_spec(vsf);
    }

    const bool need_second = !P.is_zero();
    std::array<ScalarField, 3> dw, dv;
    std::array<ScalarField, 6> d2w;  // xx, xy, xz, yy, yz, zz
    for (int a = 0; a < 3; ++a) {
        SpectralField d = wsf;
        ops.derivative_spec(d, a);
        dw[a] = ops.backward(d);
        if (need_second) {
            d = vsf;
            ops.derivative_spec(d, a);
            dv[a] = ops.backward(d);
        }
    }
    static constexpr std::array<std::pair<int, int>, 6> pairs = {
        {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
    for (std::size_t p = 0; need_second && p < 6; ++p) {
        SpectralField d = wsf;
        const auto [a, b] = pairs[p];
        ops.apply_multiplier(d, [a, b](std::complex<double>& c, double kx, double ky, double kz, bool nyq) {
            if (nyq) {
                c = 0.0;
                return;
            }
            const double k[3] = {kx, ky, kz};
            c *= -k[a] * k[b];
        });
        d2w[p] = ops.backward(d);
    }
    ScalarField vf = opts.dealias ? ops.backward(vsf) : state.v;

    // quadratic terms
    ScalarField numer(g);
    static constexpr std::size_t pair_index[4][4] = {{0, 0, 0, 0}, {0, 0, 1, 2}, {0, 1, 3, 4}, {0, 2, 4, 5}};
    if (!trivial) {
        for (std::size_t i = 0; i < total; ++i) {
            const double du[4] = {vf[i], dw[0][i], dw[1][i], dw[2][i]};
            double acc = 0.0;
            if (need_second)
                for (std::size_t gi = 0; gi < 4; ++gi)
                    for (std::size_t a = 1; a <= 3; ++a) {
                        acc += 2.0 * P(gi, a, 0) * du[gi] * dv[a - 1][i];
                        for (std::size_t b = 1; b <= 3; ++b)
                            acc += P(gi, a, b) * du[gi] * d2w[pair_index[a][b]][i];
                    }
            if (opts.q0) {
                acc += -vf[i] * vf[i] + dw[0][i] * dw[0][i] + dw[1][i] * dw[1][i] + dw[2][i] * dw[2][i];
            }
            numer[i] = acc;
        }
        if (opts.dealias) numer = ops.dealias(numer);
    }

    ScalarField src;
    if (opts.source) {
        src = ScalarField(g);
        opts.source(state.t, src);
    }

    out.dv = ScalarField(g);
    out.margin = 1.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < total; ++i) {
        double denom = 1.0;
        if (!P.is_zero()) {
            double s = P(0, 0, 0) * vf[i];
            for (std::size_t c = 1; c <= 3; ++c) s += P(c, 0, 0) * dw[c - 1][i];
            denom = 1.0 - s;
            if (denom < out.margin) {
                out.margin = denom;
                worst = i;
            }
        }
        double num = out.lap[i] + numer[i];
        if (opts.source) num += src[i];
        out.dv[i] = num / denom;
    }
    if (out.margin < 0.5)
        throw HyperbolicityError("hyperbolicity margin " + std::to_string(out.margin) +
                                 " < 0.5 at grid index " + std::to_string(worst));
    return out;
}

// Classical explicit RK4 update of (w, v); t advances by dt.
inline FieldState step_rk4(const FieldState& state, const NullFormTensor& P, double dt,
                           const RhsOptions& opts = {}, double* min_margin = nullptr) {
    const Grid3& g = state.grid();
    const std::size_t total = g.size();
    double margin = 1.0;

    auto stage = [&](const FieldState& base, const Rhs& k, double frac) {
        FieldState s{ScalarField(g), ScalarField(g), base.t + frac * dt};
        for (std::size_t i = 0; i < total; ++i) {
            s.w[i] = base.w[i] + frac * dt * k.dw[i];
            s.v[i] = base.v[i] + frac * dt * k.dv[i];
        }
        return s;
    };

    Rhs k1 = compute_rhs(state, P, opts);
    margin = std::min(margin, k1.margin);
    FieldState s2 = stage(state, k1, 0.5);
    Rhs k2 = compute_rhs(s2, P, opts);
    margin = std::min(margin, k2.margin);
    FieldState s3 = stage(state, k2, 0.5);
    Rhs k3 = compute_rhs(s3, P, opts);
    margin = std::min(margin, k3.margin);
    FieldState s4 = stage(state, k3, 1.0);
    Rhs k4 = compute_rhs(s4, P, opts);
    margin = std::min(margin, k4.margin);

    FieldState out{ScalarField(g), ScalarField(g), state.t + dt};
    const double c = dt / 6.0;
    for (std::size_t i = 0; i < total; ++i) {
        out.w[i] = state.w[i] + c * (k1.dw[i] + 2.0 * k2.dw[i] + 2.0 * k3.dw[i] + k4.dw[i]);
        out.v[i] = state.v[i] + c * (k1.dv[i] + 2.0 * k2.dv[i] + 2.0 * k3.dv[i] + k4.dv[i]);
    }
    if (min_margin) *min_margin = std::min(*min_margin, margin);
    return out;
}

struct EnergyRow {
    double t = 0.0;
    double e_nat = 0.0;
    double ghost_flux_acc = 0.0;
    double e_gst = 0.0;
    double e_con = 0.0;
    double e_tilde = 0.0;
    double sup_w_weighted = 0.0;
    double sup_dw_weighted = 0.0;
    double ks_ratio = 0.0;  // 0 marks undefined
    double margin = 1.0;
    double r_support = 0.0;
};

struct RunArtifacts {
    std::vector<EnergyRow> rows;
    std::vector<IdentitySample> identity;
    std::vector<L2Sample> l2;
    std::vector<double> checkpoint_ts;
    std::vector<ScatterData> pullbacks;
    std::vector<double> sup_dw_raw;  // raw sup |dw| per diagnostic row
    FieldState final_state;
    double min_margin = 1.0;
    int status = kRunOk;
    std::string message;
    bool wraparound = false;  // cone-weighted diagnostics became invalid
    double w0_l2 = 0.0, w1_l1 = 0.0, w1_l2 = 0.0;
    std::vector<std::pair<long, FieldState>> snapshots;  // (step, state)
};

// Steps the state to t_end, collecting diagnostics at the configured cadence
// and accumulating the ghost flux by the trapezoid rule.
inline RunArtifacts run(const RunConfig& config, const FieldState& data, const SourceFn& source = {}) {
    config.validate();
    const Grid3 g = config.grid();
    if (data.grid() != g) throw ConfigError("initial data grid does not match config grid");

    RunArtifacts art;
    art.w0_l2 = l2_norm(data.w);
    art.w1_l1 = l1_norm(data.v);
    art.w1_l2 = l2_norm(data.v);

    const NullFormTensor P = config.resolve_tensor();
    const GhostWeight ghost(config.delta);
    SupportPolicy policy = config.support_policy();
    const Closure closure =
        config.mode == "free" ? Closure::free() : Closure::with_tensor(P, config.q0_enabled);

    const double dt0 = config.dt();
    const long steps = config.t_end > 0.0 ? std::lround(std::ceil(config.t_end / dt0 - 1e-12)) : 0;
    const double dt = steps > 0 ? config.t_end / static_cast<double>(steps) : 0.0;

    const double scale0 = std::max(data.w.max_abs(), data.v.max_abs());
    const double support_threshold = config.support_threshold_rel * (scale0 > 0.0 ? scale0 : 1.0);
    // anchor the policy to the initial scale: a decaying solution must not see
    // its support threshold sink into the dealiasing noise floor
    policy.threshold_abs = support_threshold;
    {
        const double r0 = support_radius(data, support_threshold);
        if (config.t_end > config.half_width - r0 - policy.margin_cells * g.spacing())
            art.message = "warning: t_end may exceed the wraparound guard (initial support radius " +
                          std::to_string(r0) + ")";
    }

    RhsOptions rhs_opts{config.dealias, config.q0_enabled, source};

    auto diagnose = [&](const FieldState& s, double margin, double& flux_prev, double& flux_acc,
                        bool& first) {
        EnergyRow row;
        row.t = s.t;
        row.e_nat = natural_energy(s);
        row.margin = margin;
        row.r_support = support_radius(s, support_threshold);

        const double rate = ghost_flux_rate(s, ghost);
        if (!first) flux_acc += 0.5 * (flux_prev + rate) * (s.t - art.rows.back().t);
        flux_prev = rate;
        first = false;
        row.ghost_flux_acc = flux_acc;
        row.e_gst = ghost_energy(s, ghost, flux_acc);

        const bool cone_valid =
            row.r_support < config.half_width - policy.margin_cells * g.spacing();
        if (cone_valid) try {
            const ConformalEnergies ce = conformal_energy(s, policy);
            row.e_con = ce.e_con;
            row.e_tilde = ce.e_tilde;
            const SupRecord sup = weighted_sup_tracker(s, policy);
            row.sup_w_weighted = sup.sup_w_weighted;
            row.sup_dw_weighted = sup.sup_dw_weighted;
            art.sup_dw_raw.push_back(sup.sup_dw_raw);
            if (config.track_ks) {
                auto ks = ks_ratio(s, closure, policy);
                row.ks_ratio = ks.value_or(0.0);
            }
            // forcing for the identity and L2-bound records
            ScalarField f(g);
            if (config.mode == "free" && !source) {
                // f == 0; keep the zero field
            } else if (config.mode == "free") {
                source(s.t, f);
            } else {
                Rhs r = compute_rhs(s, P, rhs_opts);
                for (std::size_t i = 0; i < g.size(); ++i) f[i] = r.dv[i] - r.lap[i];
            }
            art.identity.push_back(identity_sample(s, &f, ghost, policy));
            art.l2.push_back({s.t, l2_norm(s.w), l1_norm(f), l2_norm(f)});
        } catch (const SupportMarginError&) {
            // the policy rescales its threshold by the current max; it can
            // trip even when the run-level cone check passed
            row.e_con = 0.0;
            row.e_tilde = 0.0;
            row.sup_w_weighted = 0.0;
            row.sup_dw_weighted = 0.0;
            row.ks_ratio = 0.0;
            art.wraparound = true;
        } else {
            art.wraparound = true;
        }
        art.rows.push_back(row);
    };

    FieldState state = data;
    double flux_prev = 0.0, flux_acc = 0.0;
    bool first = true;
    double margin = 1.0;

    try {
        diagnose(state, 1.0, flux_prev, flux_acc, first);
        std::size_t next_checkpoint = 0;
        auto maybe_checkpoint = [&](const FieldState& s) {
            while (next_checkpoint < config.checkpoints.size() &&
                   s.t >= config.checkpoints[next_checkpoint] - 0.25 * dt) {
                art.checkpoint_ts.push_back(s.t);
                art.pullbacks.push_back(scattering_pullback(s));
                ++next_checkpoint;
            }
        };
        maybe_checkpoint(state);

        for (long step = 1; step <= steps; ++step) {
            double step_margin = 1.0;
            if (config.mode == "free" && !source) {
                state = free_evolve(state, dt);
            } else if (config.mode == "free") {
                ScalarField f_mid(g);
                source(state.t + 0.5 * dt, f_mid);
                state = duhamel_step(state, f_mid, dt);
            } else {
                state = step_rk4(state, P, dt, rhs_opts, &step_margin);
            }
            margin = std::min(margin, step_margin);
            art.min_margin = margin;

            if (!state.w.all_finite() || !state.v.all_finite()) {
                art.status = kRunNanAbort;
                art.message = "NaN detected after step " + std::to_string(step) + " (t = " +
                              std::to_string(state.t) + ")";
                art.final_state = state;
                return art;
            }
            if (config.snapshot_every > 0 && step % config.snapshot_every == 0)
                art.snapshots.emplace_back(step, state);
            if (step % config.diagnostics_every == 0 || step == steps)
                diagnose(state, step_margin, flux_prev, flux_acc, first);
            maybe_checkpoint(state);
        }
    } catch (const HyperbolicityError& e) {
        art.status = kRunMarginAbort;
        art.message = e.what();
        art.final_state = state;
        return art;
    }

    art.final_state = state;
    return art;
}

}  // namespace nullwave
