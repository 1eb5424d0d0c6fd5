// Acceptance criteria battery. Each criterion prints exactly one PASS/FAIL
// line; the gtest assertion mirrors the printed verdict.
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nullwave/nullwave.hpp"

using namespace nullwave;
namespace fs = std::filesystem;

namespace {

void report(int n, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  (%s)\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    EXPECT_TRUE(pass) << "criterion " << n << ": " << detail;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

RunConfig small_data_config(std::size_t n) {
    RunConfig cfg;
    cfg.n = n;
    cfg.half_width = 16.0;
    cfg.tensor_name = "mc-family";
    cfg.delta = 1.0 / 24.0;
    cfg.cfl = 0.25;
    cfg.t_end = 8.0;
    cfg.diagnostics_every = n == 64 ? 4 : 2;  // samples every 0.5 time units
    // dealiasing ringing sits near 1e-6 of the peak at n=64 but near 1e-3 at
    // n=32, where the 2/3 cutoff bites into the Gaussian spectrum
    cfg.support_threshold_rel = n == 64 ? 1e-4 : 1e-2;
    cfg.data_kind = "gaussian";
    cfg.data_width = 1.0;
    cfg.data_amplitude = 1.0;
    cfg.data_epsilon = 0.01;
    cfg.checkpoints = {2.0, 4.0, 6.0, 8.0};
    cfg.track_ks = (n == 64);
    return cfg;
}

struct SharedRuns {
    RunConfig cfg8 = small_data_config(64);
    RunArtifacts run8;      // criteria 8, 9, 10, 11
    RunArtifacts free_ref;  // criteria 5, 9
    RunConfig cfg32 = small_data_config(32);
    RunArtifacts run32;  // criterion 11
};

const SharedRuns& shared_runs() {
    static SharedRuns* s = [] {
        auto* r = new SharedRuns;
        r->run8 = run(r->cfg8, make_initial_data(r->cfg8));
        RunConfig free_cfg = r->cfg8;
        free_cfg.mode = "free";
        free_cfg.track_ks = false;
        free_cfg.checkpoints.clear();
        r->free_ref = run(free_cfg, make_initial_data(free_cfg));
        r->run32 = run(r->cfg32, make_initial_data(r->cfg32));
        return r;
    }();
    return *s;
}

const EnergyRow* row_at(const RunArtifacts& art, double t) {
    for (const auto& row : art.rows)
        if (std::abs(row.t - t) < 1e-9) return &row;
    return nullptr;
}

}  // namespace

TEST(Acceptance, Criterion01_NullValidatorCorpus) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = validate_null_condition(NullFormTensor::zero(), 1e-12).passed;
    double worst = 0.0;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 5; ++k) {
        const auto cert =
            validate_null_condition(NullFormTensor::mc_family({u(rng), u(rng), u(rng), u(rng)}), 1e-12);
        worst = std::max(worst, cert.max_violation);
        pass = pass && cert.passed;
    }
    const auto bad = validate_null_condition(NullFormTensor::bad_000(), 1e-10);
    pass = pass && !bad.passed && std::abs(bad.max_violation - 1.0) <= 1e-12;
    const double dt = seconds_since(t0);
    pass = pass && dt < 1.0;
    report(1, pass, fmt("max mc-family violation %.2e, bad-000 violation %.15f, %.2fs", worst,
                        bad.max_violation, dt));
}

TEST(Acceptance, Criterion02_VectorFieldIdentitySuite) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid3 g(64, 16.0);
    double worst = 0.0;
    bool pass = true;
    std::size_t checks = 0;
    for (std::size_t k = 0; k < 10; ++k) {
        const FieldState s = random_interior_state(g, 1000 + k);
        for (const auto& c : lemma22_residuals(s)) {
            worst = std::max(worst, c.residual);
            pass = pass && c.pass;
            ++checks;
        }
        for (const auto& c : lemma21_residuals(s)) {
            worst = std::max(worst, c.residual);
            pass = pass && c.pass;
            ++checks;
        }
    }
    const double dt = seconds_since(t0);
    pass = pass && dt < 30.0;
    report(2, pass, fmt("%zu identity checks, worst residual %.2e, %.1fs", checks, worst, dt));
}

TEST(Acceptance, Criterion03_NullFormBound) {
    const std::array<std::array<double, 4>, 3> cs = {
        {{1.0, 0.0, 0.0, 0.0}, {0.3, -0.7, 0.2, 0.5}, {-0.4, 0.1, 0.9, -0.2}}};
    std::size_t violations = 0, checks = 0;
    double worst_residual = 0.0;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto rep = null_form_bound_battery(NullFormTensor::mc_family(cs[k]), 64, 1000, 500 + k);
        violations += rep.violations;
        checks += rep.checks;
        worst_residual = std::max(worst_residual, rep.max_decomp_residual);
    }
    const bool pass = violations == 0 && worst_residual <= 1e-12 && checks >= 3 * 64 * 1000;
    report(3, pass, fmt("%zu jet checks, %zu violations, max decomposition residual %.2e", checks,
                        violations, worst_residual));
}

TEST(Acceptance, Criterion04_ExactPropagator) {
    const Grid3 g(64, 16.0);
    // standing wave w = cos(k.x) cos(|k| t)
    const long mx = 4, my = 2, mz = -3;
    const double k = g.dk() * std::sqrt(double(mx * mx + my * my + mz * mz));
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    const double kx = g.dk() * mx, ky = g.dk() * my, kz = g.dk() * mz;
    s.w.fill([&](double x, double y, double z) { return std::cos(kx * x + ky * y + kz * z); });
    FieldState out = free_evolve(s, 10.0);
    double err_mode = 0.0;
    const double c10 = std::cos(k * 10.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        err_mode = std::max(err_mode, std::abs(out.w[i] - c10 * s.w[i]));

    FieldState gauss{ScalarField(g), ScalarField(g), 0.0};
    gauss.w.fill([](double x, double y, double z) { return std::exp(-0.5 * (x * x + y * y + z * z)); });
    gauss.v.fill([](double x, double y, double z) { return 0.3 * std::exp(-0.4 * (x * x + y * y + z * z)); });
    const double e0 = natural_energy(gauss);
    FieldState evo = gauss;
    for (int j = 0; j < 20; ++j) evo = free_evolve(evo, 0.5);
    const double e_drift = std::abs(natural_energy(evo) - e0) / e0;

    const ScatterData pb = scattering_pullback(evo);
    FieldState round = free_evolve(FieldState(pb.u0, pb.u1, 0.0), evo.t);
    double err_round = 0.0;
    const double scale = std::max(evo.w.max_abs(), evo.v.max_abs());
    for (std::size_t i = 0; i < g.size(); ++i) {
        err_round = std::max(err_round, std::abs(round.w[i] - evo.w[i]) / scale);
        err_round = std::max(err_round, std::abs(round.v[i] - evo.v[i]) / scale);
    }
    const bool pass = err_mode <= 1e-11 && e_drift <= 1e-12 && err_round <= 1e-11;
    report(4, pass, fmt("standing wave err %.2e, energy drift %.2e, pullback round trip %.2e",
                        err_mode, e_drift, err_round));
}

TEST(Acceptance, Criterion05_ConformalConservation) {
    const RunArtifacts& art = shared_runs().free_ref;
    bool pass = art.status == kRunOk && !art.rows.empty();
    double drift = 0.0, ratio_lo = 1.0, ratio_hi = 1.0;
    if (pass) {
        const double e0 = art.rows.front().e_tilde;
        const double c0 = art.rows.front().e_con;
        for (const auto& row : art.rows) {
            drift = std::max(drift, std::abs(row.e_tilde - e0) / e0);
            ratio_lo = std::min(ratio_lo, row.e_con / c0);
            ratio_hi = std::max(ratio_hi, row.e_con / c0);
        }
        pass = drift <= 1e-6 && ratio_hi <= 4.0 && ratio_lo >= 0.25;
    }
    report(5, pass, fmt("free-run e_tilde drift %.2e, e_con ratio range [%.3f, %.3f]", drift,
                        ratio_lo, ratio_hi));
}

TEST(Acceptance, Criterion06_EnergyIdentityResiduals) {
    // forced linear wave (P = 0, Q0 off) so both identities carry a genuine
    // source; RK4 state error O(dt^4) + Simpson cadence error O(cadence^4)
    // must shrink by >= 4x when both are halved.
    auto forced_run = [](double cfl) {
        RunConfig cfg;
        cfg.n = 64;
        cfg.half_width = 16.0;
        cfg.tensor_name = "zero";
        cfg.q0_enabled = false;
        cfg.dealias = false;
        cfg.cfl = cfl;
        cfg.t_end = 2.25;
        cfg.diagnostics_every = 2;
        cfg.track_ks = false;
        cfg.support_threshold_rel = 1e-4;
        SourceFn src = [](double t, ScalarField& out) {
            const double a = 0.01 * std::cos(t);
            out.fill([a](double x, double y, double z) {
                const double dx = x - 8.0;
                return a * std::exp(-0.5 * (dx * dx + y * y + z * z));
            });
        };
        FieldState data{ScalarField(cfg.grid()), ScalarField(cfg.grid()), 0.0};
        return run(cfg, data, src);
    };
    const RunArtifacts coarse = forced_run(0.0625);
    const RunArtifacts fine = forced_run(0.03125);
    bool pass = coarse.status == kRunOk && fine.status == kRunOk && coarse.identity.size() >= 3;
    IdentityResiduals rc{}, rf{};
    if (pass) {
        rc = identity_residuals(coarse.identity);
        rf = identity_residuals(fine.identity);
        pass = rc.ghost <= 1e-6 && rc.conformal <= 1e-6 && rc.ghost / rf.ghost >= 4.0 &&
               rc.conformal / rf.conformal >= 4.0;
    }
    report(6, pass,
           fmt("ghost %.2e -> %.2e (x%.1f), conformal %.2e -> %.2e (x%.1f)", rc.ghost, rf.ghost,
               rf.ghost > 0 ? rc.ghost / rf.ghost : 0.0, rc.conformal, rf.conformal,
               rf.conformal > 0 ? rc.conformal / rf.conformal : 0.0));
}

TEST(Acceptance, Criterion07_ManufacturedSolutionConvergence) {
    const auto t0 = std::chrono::steady_clock::now();
    const MmsResult res = mms_convergence(64, 16.0, {0.1, 0.05, 0.025}, 1.0);
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < res.errors.size(); ++i)
        decreasing = decreasing && res.errors[i + 1] < res.errors[i];
    const double dt = seconds_since(t0);
    const bool pass = std::abs(res.observed_order - 4.0) <= 0.2 && decreasing &&
                      res.spatial_floor < res.errors.front() && dt < 300.0;
    report(7, pass, fmt("observed order %.3f, errors %.2e -> %.2e, %.0fs", res.observed_order,
                        res.errors.front(), res.errors.back(), dt));
}

TEST(Acceptance, Criterion08_SmallDataNullRun) {
    const SharedRuns& sh = shared_runs();
    const RunArtifacts& art = sh.run8;
    const EnergyRow* r1 = row_at(art, 1.0);
    const EnergyRow* r8 = row_at(art, 8.0);
    bool pass = art.status == kRunOk && art.min_margin >= 0.9 && r1 && r8;
    double gst = 0.0, con = 0.0, sup = 0.0;
    if (pass) {
        gst = r8->e_gst / r1->e_gst;
        con = r8->e_con / r1->e_con;
        sup = r8->sup_dw_weighted / r1->sup_dw_weighted;
        pass = gst <= 1.10 && gst >= 1.0 / 1.10 && con <= 4.0 && con >= 0.25 && sup <= 3.0 &&
               sup >= 1.0 / 3.0;
    }
    report(8, pass,
           fmt("status %d, margin %.4f, e_gst(8)/e_gst(1) %.4f, e_con ratio %.3f, sup ratio %.3f",
               art.status, art.min_margin, gst, con, sup));
}

TEST(Acceptance, Criterion09_DecayExponent) {
    const SharedRuns& sh = shared_runs();
    auto fit_of = [](const RunArtifacts& art) {
        std::vector<double> t;
        for (const auto& row : art.rows) t.push_back(row.t);
        return decay_fit(t, art.sup_dw_raw, 2.0, 8.0);
    };
    bool pass = sh.run8.rows.size() == sh.run8.sup_dw_raw.size() &&
                sh.free_ref.rows.size() == sh.free_ref.sup_dw_raw.size();
    double p_nl = 0.0, p_free = 0.0;
    if (pass) {
        p_nl = fit_of(sh.run8).exponent;
        p_free = fit_of(sh.free_ref).exponent;
        pass = p_nl >= -1.3 && p_nl <= -0.7 && std::abs(p_nl - p_free) <= 0.2;
    }
    report(9, pass, fmt("nonlinear exponent %.3f, free reference %.3f", p_nl, p_free));
}

TEST(Acceptance, Criterion10_ScatteringProxy) {
    const RunArtifacts& art = shared_runs().run8;
    bool pass = art.pullbacks.size() == 4;
    std::string detail = "missing checkpoints";
    if (pass) {
        const auto sc = scattering_convergence(art.checkpoint_ts, art.pullbacks);
        pass = sc.strictly_decreasing;
        detail = fmt("pullback differences %.3e, %.3e, %.3e", sc.differences[0], sc.differences[1],
                     sc.differences[2]);
    }
    report(10, pass, detail);
}

TEST(Acceptance, Criterion11_L2BoundStability) {
    const SharedRuns& sh = shared_runs();
    auto ratio_of = [](const RunArtifacts& art) {
        return l2_bound_check(art.l2, 2.0 / 3.0, art.w0_l2, art.w1_l1, art.w1_l2).max_ratio;
    };
    const double r64 = ratio_of(sh.run8);
    const double r32 = ratio_of(sh.run32);
    const bool pass = r64 > 0.0 && std::abs(r64 - r32) / r64 <= 0.20;
    report(11, pass, fmt("max ratio n=64: %.4f, n=32: %.4f, spread %.1f%%", r64, r32,
                         100.0 * std::abs(r64 - r32) / std::max(r64, 1e-300)));
}

TEST(Acceptance, Criterion12_Determinism) {
    RunConfig cfg = small_data_config(32);
    cfg.t_end = 2.0;
    const fs::path base = fs::temp_directory_path() / "nullwave_determinism";
    fs::remove_all(base);
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
        cfg.output_dir = (base / ("run" + std::to_string(k))).string();
        const RunArtifacts art = run(cfg, make_initial_data(cfg));
        write_run_outputs(cfg, art);
        std::ifstream in(fs::path(cfg.output_dir) / "energies.csv", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        bytes[k] = ss.str();
    }
    fs::remove_all(base);
    const bool pass = !bytes[0].empty() && bytes[0] == bytes[1];
    report(12, pass, fmt("energies.csv %zu bytes, identical: %s", bytes[0].size(),
                         pass ? "yes" : "no"));
}
