#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "nullwave/solver.hpp"

namespace nullwave {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config: bad boolean value for " + key + ": '" + value + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace detail

// Applies one dotted key to the config; rejects unknown keys.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "grid.n") {
        const long n = parse_long(key, value);
        if (n <= 0) throw ConfigError("config: grid.n must be positive");
        cfg.n = static_cast<std::size_t>(n);
    } else if (key == "grid.half_width") {
        cfg.half_width = parse_double(key, value);
    } else if (key == "time.cfl") {
        cfg.cfl = parse_double(key, value);
    } else if (key == "time.t_end") {
        cfg.t_end = parse_double(key, value);
    } else if (key == "physics.delta") {
        cfg.delta = parse_double(key, value);
        if (!(cfg.delta > 0.0 && cfg.delta < 1.0 / 12.0))
            throw ConfigError("config: physics.delta = " + value +
                              " outside the admissible range (0, 1/12)");
    } else if (key == "physics.tensor") {
        cfg.tensor_name = value;
    } else if (key == "physics.q0") {
        cfg.q0_enabled = parse_bool(key, value);
    } else if (key == "physics.dealias") {
        cfg.dealias = parse_bool(key, value);
    } else if (key == "run.mode") {
        cfg.mode = value;
    } else if (key == "run.seed") {
        cfg.seed = static_cast<unsigned long>(parse_long(key, value));
    } else if (key == "run.snapshot_every") {
        cfg.snapshot_every = parse_long(key, value);
    } else if (key == "run.diagnostics_every") {
        cfg.diagnostics_every = parse_long(key, value);
        if (cfg.diagnostics_every <= 0) throw ConfigError("config: run.diagnostics_every must be positive");
    } else if (key == "run.track_ks") {
        cfg.track_ks = parse_bool(key, value);
    } else if (key == "data.kind") {
        if (value != "gaussian" && value != "bump" && value != "zero" && value != "large-family")
            throw ConfigError("config: unknown data.kind '" + value + "'");
        cfg.data_kind = value;
    } else if (key == "data.width") {
        cfg.data_width = parse_double(key, value);
        if (!(cfg.data_width > 0.0)) throw ConfigError("config: data.width must be positive");
    } else if (key == "data.amplitude") {
        cfg.data_amplitude = parse_double(key, value);
    } else if (key == "data.center") {
        const auto xs = parse_list(key, value);
        if (xs.size() != 3) throw ConfigError("config: data.center needs three comma-separated values");
        cfg.data_center = {xs[0], xs[1], xs[2]};
    } else if (key == "data.epsilon") {
        cfg.data_epsilon = parse_double(key, value);
    } else if (key == "scatter.checkpoints") {
        cfg.checkpoints = parse_list(key, value);
    } else if (key == "l2.eta") {
        cfg.eta = parse_double(key, value);
    } else if (key == "output.dir") {
        cfg.output_dir = value;
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

// key=value lines; '#' starts a comment; blank lines ignored.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    long lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
        apply_config_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

// Command-line overrides take precedence over file values.
inline void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("config: override is not key=value: '" + ov + "'");
        apply_config_key(cfg, detail::trim(ov.substr(0, eq)), detail::trim(ov.substr(eq + 1)));
    }
}

namespace detail {

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

// Canonical fully resolved echo, written into every run directory.
inline std::string echo_config(const RunConfig& cfg) {
    using detail::fmt_g17;
    std::ostringstream out;
    out << "grid.n = " << cfg.n << "\n";
    out << "grid.half_width = " << fmt_g17(cfg.half_width) << "\n";
    out << "time.cfl = " << fmt_g17(cfg.cfl) << "\n";
    out << "time.t_end = " << fmt_g17(cfg.t_end) << "\n";
    out << "physics.delta = " << fmt_g17(cfg.delta) << "\n";
    out << "physics.tensor = " << cfg.tensor_name << "\n";
    out << "physics.q0 = " << (cfg.q0_enabled ? "true" : "false") << "\n";
    out << "physics.dealias = " << (cfg.dealias ? "true" : "false") << "\n";
    out << "run.mode = " << cfg.mode << "\n";
    out << "run.seed = " << cfg.seed << "\n";
    out << "run.snapshot_every = " << cfg.snapshot_every << "\n";
    out << "run.diagnostics_every = " << cfg.diagnostics_every << "\n";
    out << "run.track_ks = " << (cfg.track_ks ? "true" : "false") << "\n";
    out << "data.kind = " << cfg.data_kind << "\n";
    out << "data.width = " << fmt_g17(cfg.data_width) << "\n";
    out << "data.amplitude = " << fmt_g17(cfg.data_amplitude) << "\n";
    out << "data.center = " << fmt_g17(cfg.data_center[0]) << "," << fmt_g17(cfg.data_center[1]) << ","
        << fmt_g17(cfg.data_center[2]) << "\n";
    out << "data.epsilon = " << fmt_g17(cfg.data_epsilon) << "\n";
    out << "scatter.checkpoints =";
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i)
        out << (i ? "," : " ") << fmt_g17(cfg.checkpoints[i]);
    out << "\n";
    out << "l2.eta = " << fmt_g17(cfg.eta) << "\n";
    out << "output.dir = " << cfg.output_dir << "\n";
    return out.str();
}

}  // namespace nullwave
