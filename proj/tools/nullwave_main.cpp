// nullwave command line tool: pseudo-spectral runs and diagnostics for the
// quasilinear wave equation under the null condition.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nullwave/nullwave.hpp"

namespace {

using namespace nullwave;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig resolve_config(const std::string& config_path, const std::vector<std::string>& overrides,
                         const std::string& out_dir) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(read_file(config_path));
    apply_overrides(cfg, overrides);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();
    return cfg;
}

int cmd_validate_tensor(const std::string& name, double tol) {
    NullFormTensor p = name.front() == '@' ? load_tensor_file(name.substr(1)) : NullFormTensor::preset(name);
    const NullCertificate cert = validate_null_condition(p, tol);
    std::printf("tensor %s: max_violation %.3e over %zu directions -> %s\n", name.c_str(),
                cert.max_violation, cert.sample_count, cert.passed ? "NULL" : "NOT NULL");
    return cert.passed ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 const std::string& out_dir, bool force_free) {
    RunConfig cfg = resolve_config(config_path, overrides, out_dir);
    if (force_free) cfg.mode = "free";
    const FieldState data = make_initial_data(cfg);
    const InitialNorms norms = weighted_initial_norms(data, 2, cfg.support_policy());
    const RunArtifacts art = run(cfg, data);
    write_run_outputs(cfg, art, &norms);
    std::printf("run finished: status %d, t %.6g, min margin %.6g, %zu rows -> %s\n", art.status,
                art.final_state.t, art.min_margin, art.rows.size(),
                cfg.output_dir.empty() ? "run" : cfg.output_dir.c_str());
    if (!art.message.empty()) std::printf("%s\n", art.message.c_str());
    return art.status;
}

int cmd_mms(std::size_t n, double half_width) {
    const MmsResult res = mms_convergence(n, half_width);
    std::printf("dt            L2 error      order\n");
    for (std::size_t i = 0; i < res.dts.size(); ++i)
        std::printf("%-12.6g  %-12.6e  %s\n", res.dts[i], res.errors[i],
                    i ? std::to_string(res.orders[i - 1]).c_str() : "-");
    std::printf("observed order %.3f, spatial floor %.3e\n", res.observed_order, res.spatial_floor);
    const bool ok = std::abs(res.observed_order - 4.0) <= 0.2;
    return ok ? 0 : 1;
}

int cmd_scatter_check(const std::string& config_path, const std::vector<std::string>& overrides,
                      const std::string& out_dir) {
    RunConfig cfg = resolve_config(config_path, overrides, out_dir);
    if (cfg.checkpoints.empty()) cfg.checkpoints = {2.0, 4.0, 6.0, 8.0};
    if (cfg.t_end < cfg.checkpoints.back()) cfg.t_end = cfg.checkpoints.back();
    const FieldState data = make_initial_data(cfg);
    const RunArtifacts art = run(cfg, data);
    if (art.status != 0) {
        std::printf("run aborted: %s\n", art.message.c_str());
        return art.status;
    }
    const ScatteringConvergence sc = scattering_convergence(art.checkpoint_ts, art.pullbacks);
    for (std::size_t i = 0; i < sc.differences.size(); ++i)
        std::printf("d(pullback up to t = %g) = %.6e\n", sc.t_pairs[i], sc.differences[i]);
    std::printf("strictly decreasing: %s\n", sc.strictly_decreasing ? "yes" : "no");
    return sc.strictly_decreasing ? 0 : 1;
}

int cmd_identity_suite() {
    const auto checks = run_identity_suite();
    std::size_t failed = 0;
    double worst = 0.0;
    for (const auto& c : checks) {
        worst = std::max(worst, c.residual);
        if (!c.pass) {
            ++failed;
            std::printf("FAIL %-28s residual %.3e (tol %.1e)\n", c.name.c_str(), c.residual, c.tol);
        }
    }
    std::printf("identity suite: %zu checks, %zu failed, worst residual %.3e\n", checks.size(),
                failed, worst);
    return failed == 0 ? 0 : 1;
}

int cmd_report(const std::string& dir) {
    const std::filesystem::path csv = std::filesystem::path(dir) / "energies.csv";
    std::ifstream in(csv);
    if (!in) {
        std::fprintf(stderr, "no energies.csv in %s\n", dir.c_str());
        return 4;
    }
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> ts, sup_dw, e_gst, e_con;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::vector<double> cols;
        std::string item;
        while (std::getline(ss, item, ',')) cols.push_back(std::stod(item));
        if (cols.size() < 11) continue;
        ts.push_back(cols[0]);
        e_gst.push_back(cols[3]);
        e_con.push_back(cols[4]);
        sup_dw.push_back(cols[7]);
    }
    if (ts.empty()) {
        std::fprintf(stderr, "empty energies.csv\n");
        return 4;
    }
    std::printf("rows %zu, t in [%g, %g]\n", ts.size(), ts.front(), ts.back());
    std::printf("e_gst: first %.6e last %.6e\n", e_gst.front(), e_gst.back());
    std::printf("e_con: first %.6e last %.6e\n", e_con.front(), e_con.back());
    try {
        // decay of the raw sup |dw| needs the weighted column unwound; report
        // the weighted sup trend instead, which should stay bounded.
        const DecayFit fit = decay_fit(ts, sup_dw, 2.0, ts.back());
        std::printf("weighted sup |dw| log-log slope over [2, %g]: %.3f\n", ts.back(), fit.exponent);
    } catch (const std::exception& e) {
        std::printf("decay fit unavailable: %s\n", e.what());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nullwave: pseudo-spectral laboratory for the 3D quasilinear null-form wave equation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, tensor_name = "mc-family", report_dir;
    std::vector<std::string> overrides;
    double tol = 1e-12;
    std::size_t mms_n = 64;
    double mms_L = 16.0;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "config file (key=value)");
        sub->add_option("-o,--out", out_dir, "output directory");
        sub->add_option("-s,--set", overrides, "override key=value (repeatable)");
    };

    auto* validate = app.add_subcommand("validate-tensor", "check the null condition for a tensor");
    validate->add_option("-t,--tensor", tensor_name, "preset name or @file");
    validate->add_option("--tol", tol, "violation tolerance");

    auto* simulate = app.add_subcommand("simulate", "nonlinear run with diagnostics");
    add_run_flags(simulate);
    auto* free_run = app.add_subcommand("free-run", "linear free-wave reference run");
    add_run_flags(free_run);
    auto* mms = app.add_subcommand("mms-convergence", "manufactured-solution RK4 order check");
    mms->add_option("-n", mms_n, "grid points per axis");
    mms->add_option("-L", mms_L, "half width");
    auto* scatter = app.add_subcommand("scatter-check", "pullback convergence at checkpoints");
    add_run_flags(scatter);
    app.add_subcommand("identity-suite", "vector-field and null-form identity battery");
    auto* report = app.add_subcommand("report", "summarize a run directory");
    report->add_option("dir", report_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate_tensor(tensor_name, tol);
        if (simulate->parsed()) return cmd_simulate(config_path, overrides, out_dir, false);
        if (free_run->parsed()) return cmd_simulate(config_path, overrides, out_dir, true);
        if (mms->parsed()) return cmd_mms(mms_n, mms_L);
        if (scatter->parsed()) return cmd_scatter_check(config_path, overrides, out_dir);
        if (app.get_subcommand("identity-suite")->parsed()) return cmd_identity_suite();
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const HyperbolicityError& e) {
        std::fprintf(stderr, "margin abort: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
