#include <gtest/gtest.h>

#include <cmath>

#include "nullwave/mms.hpp"
#include "nullwave/runio.hpp"
#include "nullwave/solver.hpp"

using namespace nullwave;

namespace {
const Grid3 kGrid(32, 16.0);

FieldState gaussian_state(const Grid3& g, double amp, double shift = 0.0) {
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    s.w.fill([amp, shift](double x, double y, double z) {
        const double xs = x - shift;
        return amp * std::exp(-0.5 * (xs * xs + y * y + z * z));
    });
    s.v.fill([amp, shift](double x, double y, double z) {
        const double xs = x - shift;
        return 0.5 * amp * std::exp(-0.5 * (xs * xs + y * y + z * z));
    });
    return s;
}

RunConfig base_config() {
    RunConfig cfg;
    cfg.n = 32;
    cfg.half_width = 16.0;
    cfg.t_end = 1.0;
    cfg.diagnostics_every = 2;
    cfg.track_ks = false;
    return cfg;
}

}  // namespace

TEST(Solver, ZeroDataStaysZero) {
    RunConfig cfg = base_config();
    FieldState data{ScalarField(kGrid), ScalarField(kGrid), 0.0};
    const RunArtifacts art = run(cfg, data);
    EXPECT_EQ(art.status, kRunOk);
    for (const auto& row : art.rows) {
        EXPECT_EQ(row.e_nat, 0.0);
        EXPECT_EQ(row.e_con, 0.0);
        EXPECT_EQ(row.e_gst, 0.0);
    }
    EXPECT_EQ(art.final_state.w.max_abs(), 0.0);
}

TEST(Solver, FreeSubsystemTimeReversal) {
    // P = 0 and Q0 off: a dt then -dt round trip deviates only by the RK4
    // reversal defect, O(dt^6) for one step pair
    const FieldState s0 = gaussian_state(kGrid, 0.1);
    RhsOptions opts;
    opts.q0 = false;
    const NullFormTensor P;
    const double scale = std::max(s0.w.max_abs(), s0.v.max_abs());
    auto round_trip_err = [&](double dt) {
        FieldState s1 = step_rk4(s0, P, dt, opts);
        FieldState s2 = step_rk4(s1, P, -dt, opts);
        double err = 0.0;
        for (std::size_t i = 0; i < kGrid.size(); ++i) {
            err = std::max(err, std::abs(s2.w[i] - s0.w[i]));
            err = std::max(err, std::abs(s2.v[i] - s0.v[i]));
        }
        return err / scale;
    };
    const double e1 = round_trip_err(0.25);
    const double e2 = round_trip_err(0.0625);
    EXPECT_LE(e1, 1e-3);
    EXPECT_GE(e1 / e2, 1000.0);  // (1/4)^6 = 1/4096 up to higher-order terms
}

TEST(Solver, TranslationEquivariance) {
    // shifting data by one cell shifts the solution by one cell
    const double h = kGrid.spacing();
    RhsOptions opts;
    const NullFormTensor P = NullFormTensor::mc_family({1, 0, 0, 0});
    FieldState a = gaussian_state(kGrid, 0.05);
    FieldState b = gaussian_state(kGrid, 0.05, h);
    for (int k = 0; k < 4; ++k) {
        a = step_rk4(a, P, 0.25, opts);
        b = step_rk4(b, P, 0.25, opts);
    }
    double err = 0.0;
    const std::size_t n = kGrid.n;
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t ixs = (ix + 1) % n;
                err = std::max(err, std::abs(b.w.at(ixs, iy, iz) - a.w.at(ix, iy, iz)));
            }
    EXPECT_LE(err / a.w.max_abs(), 1e-10);
}

TEST(Solver, RK4ConvergenceOrder) {
    // halving dt at fixed grid reduces the final-state error against a dt/8
    // reference by >= 12x (order >= 3.6)
    const FieldState s0 = gaussian_state(kGrid, 0.05);
    const NullFormTensor P = NullFormTensor::mc_family({1, 0, 0, 0});
    RhsOptions opts;
    auto advance = [&](double dt, int steps) {
        FieldState s = s0;
        for (int k = 0; k < steps; ++k) s = step_rk4(s, P, dt, opts);
        return s;
    };
    const FieldState ref = advance(0.0125, 80);
    auto err = [&](const FieldState& s) {
        double e = 0.0;
        for (std::size_t i = 0; i < kGrid.size(); ++i) e = std::max(e, std::abs(s.w[i] - ref.w[i]));
        return e;
    };
    const double e1 = err(advance(0.1, 10));
    const double e2 = err(advance(0.05, 20));
    EXPECT_GE(e1 / e2, 12.0);
}

TEST(Solver, HyperbolicityMarginAbortsLoudly) {
    // bad-000 with large data drives 1 - P^{g00} d_g w = 1 - d_t w below 1/2
    const NullFormTensor P = NullFormTensor::bad_000();
    FieldState s{ScalarField(kGrid), ScalarField(kGrid), 0.0};
    s.v.fill([](double x, double y, double z) { return 0.8 * std::exp(-0.1 * (x * x + y * y + z * z)); });
    RhsOptions opts;
    EXPECT_THROW(compute_rhs(s, P, opts), HyperbolicityError);
}

TEST(Solver, MarginAbortSurfacesAsStatus2) {
    RunConfig cfg = base_config();
    cfg.tensor_name = "bad-000";
    FieldState data{ScalarField(kGrid), ScalarField(kGrid), 0.0};
    data.v.fill([](double x, double y, double z) { return 0.8 * std::exp(-0.1 * (x * x + y * y + z * z)); });
    const RunArtifacts art = run(cfg, data);
    EXPECT_EQ(art.status, kRunMarginAbort);
    EXPECT_FALSE(art.message.empty());
}

TEST(Solver, DeterministicRows) {
    RunConfig cfg = base_config();
    const FieldState data = gaussian_state(kGrid, 0.02);
    const RunArtifacts a = run(cfg, data);
    const RunArtifacts b = run(cfg, data);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    EXPECT_EQ(format_energies_csv(a.rows), format_energies_csv(b.rows));
}

TEST(Solver, ConfigValidation) {
    RunConfig cfg = base_config();
    cfg.delta = 0.2;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.n = 48;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.cfl = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.tensor_name = "nope";
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Solver, MmsSelfConvergence) {
    // n = 32 bottoms out at a ~1e-8 spatial floor; n = 64 resolves the source
    const MmsResult res = mms_convergence(64, 16.0, {0.1, 0.05, 0.025}, 1.0);
    EXPECT_NEAR(res.observed_order, 4.0, 0.4);
}
