#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "nullwave/config.hpp"
#include "nullwave/diagnostics.hpp"
#include "nullwave/initdata.hpp"
#include "nullwave/snapshot.hpp"
#include "nullwave/solver.hpp"

namespace nullwave {

inline const char* kEnergiesHeader =
    "t,e_nat,ghost_flux_acc,e_gst,e_con,e_tilde,sup_w_weighted,sup_dw_weighted,ks_ratio,margin,"
    "r_support";

inline std::string format_energies_csv(const std::vector<EnergyRow>& rows) {
    std::string out = kEnergiesHeader;
    out += '\n';
    char buf[512];
    for (const EnergyRow& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                      r.e_nat, r.ghost_flux_acc, r.e_gst, r.e_con, r.e_tilde, r.sup_w_weighted,
                      r.sup_dw_weighted, r.ks_ratio, r.margin, r.r_support);
        out += buf;
    }
    return out;
}

inline std::string format_initial_norms(const InitialNorms& n) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "K_value %.17g\n", n.K_value);
    out += buf;
    std::snprintf(buf, sizeof buf, "eps_value %.17g\n", n.eps_value);
    out += buf;
    std::snprintf(buf, sizeof buf, "conf_value %.17g\n", n.conf_value);
    out += buf;
    std::snprintf(buf, sizeof buf, "w0_l2 %.17g\n", n.w0_l2);
    out += buf;
    return out;
}

// Writes the standard run directory: config echo, energies.csv, initial
// norms, and any collected snapshots. Returns the directory used.
inline std::filesystem::path write_run_outputs(const RunConfig& cfg, const RunArtifacts& art,
                                               const InitialNorms* norms = nullptr) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.output_dir.empty() ? fs::path("run") : fs::path(cfg.output_dir);
    fs::create_directories(dir);
    atomic_write_file(dir / "config.echo", echo_config(cfg));
    atomic_write_file(dir / "energies.csv", format_energies_csv(art.rows));
    if (norms) atomic_write_file(dir / "initial_norms", format_initial_norms(*norms));
    if (!art.message.empty()) atomic_write_file(dir / "run.log", art.message + "\n");
    char name[64];
    for (const auto& [step, state] : art.snapshots) {
        std::snprintf(name, sizeof name, "snapshot_%06ld.nwv", step);
        save_snapshot(dir / name, state);
    }
    return dir;
}

// Realizes the configured initial data.
inline FieldState make_initial_data(const RunConfig& cfg) {
    const Grid3 g = cfg.grid();
    if (cfg.data_kind == "zero")
        return FieldState(ScalarField(g), ScalarField(g), 0.0);
    if (cfg.data_kind == "large-family") {
        const DataProfile F = DataProfile::gaussian(cfg.data_width, cfg.data_amplitude, cfg.data_center);
        return make_large_data(g, F, F, cfg.data_epsilon);
    }
    // gaussian | bump: amplitude-scaled profile for both w0 and w1, with the
    // overall size set by data.epsilon.
    DataProfile p = DataProfile::named(cfg.data_kind, cfg.data_width,
                                       cfg.data_amplitude * cfg.data_epsilon, cfg.data_center);
    return realize(g, p, p);
}

}  // namespace nullwave
