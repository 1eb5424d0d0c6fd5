#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/jet.hpp"

namespace nullwave {

inline constexpr std::array<double, 4> kMinkowski = {-1.0, 1.0, 1.0, 1.0};  // diag(m)

// Constant coefficient tensor P^{gab} of the quasilinear term, symmetric in
// its last two indices. Stored dense, 64 entries.
class NullFormTensor {
  public:
    NullFormTensor() : c_{} {}

    // Symmetrizes in (alpha, beta). If asymmetry_out is given, receives the
    // max |P[g][a][b] - P[g][b][a]| of the input.
    static NullFormTensor from_values(const std::array<double, 64>& raw, double* asymmetry_out = nullptr) {
        NullFormTensor p;
        double asym = 0.0;
        for (std::size_t g = 0; g < 4; ++g)
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b) {
                    const double x = raw[flat(g, a, b)];
                    const double y = raw[flat(g, b, a)];
                    asym = std::max(asym, std::abs(x - y));
                    p.c_[flat(g, a, b)] = 0.5 * (x + y);
                }
        for (double v : p.c_)
            if (!std::isfinite(v)) throw std::invalid_argument("NullFormTensor: non-finite entry");
        if (asymmetry_out) *asymmetry_out = asym;
        return p;
    }

    double operator()(std::size_t g, std::size_t a, std::size_t b) const { return c_[flat(g, a, b)]; }

    std::array<double, 64> values() const {
        std::array<double, 64> out;
        for (std::size_t i = 0; i < 64; ++i) out[i] = c_[i];
        return out;
    }

    bool is_zero() const {
        for (double v : c_)
            if (v != 0.0) return false;
        return true;
    }

    // Presets. "mc-family": P^{gab} = m^{ga} c^b + m^{gb} c^a, null for any c
    // because m^{ga} xi_g xi_a vanishes on null covectors.
    static NullFormTensor zero() { return NullFormTensor(); }

    static NullFormTensor mc_family(const std::array<double, 4>& c) {
        std::array<double, 64> raw{};
        for (std::size_t g = 0; g < 4; ++g)
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b) {
                    double val = 0.0;
                    if (g == a) val += kMinkowski[g] * c[b];
                    if (g == b) val += kMinkowski[g] * c[a];
                    raw[flat(g, a, b)] = val;
                }
        return from_values(raw);
    }

    // Deliberately non-null counterexample: only P^{000} = 1.
    static NullFormTensor bad_000() {
        std::array<double, 64> raw{};
        raw[flat(0, 0, 0)] = 1.0;
        return from_values(raw);
    }

    static NullFormTensor preset(const std::string& name) {
        if (name == "zero") return zero();
        if (name == "mc-family") return mc_family({1.0, 0.0, 0.0, 0.0});
        if (name == "bad-000") return bad_000();
        throw std::invalid_argument("unknown tensor preset: " + name);
    }

    static constexpr std::size_t flat(std::size_t g, std::size_t a, std::size_t b) {
        return (g * 4 + a) * 4 + b;
    }

  private:
    std::array<double, 64> c_;
};

// Lower-index covector xi_0..xi_3.
struct NullVector {
    std::array<double, 4> xi{};

    double null_defect() const {
        return xi[0] * xi[0] - (xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]);
    }

    double norm_sq() const {
        return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3];
    }

    bool is_null(double tol) const { return std::abs(null_defect()) <= tol * norm_sq(); }

    // xi = (1, -omega) for a unit 3-direction omega.
    static NullVector from_direction(const std::array<double, 3>& omega) {
        return NullVector{{1.0, -omega[0], -omega[1], -omega[2]}};
    }
};

struct NullCertificate {
    double max_violation = 0.0;
    std::size_t sample_count = 0;
    bool passed = false;
};

// Plain triple sum P[g][a][b] xi_g xi_a xi_b; no metric raising here.
inline double contract(const NullFormTensor& p, const NullVector& xi) {
    double acc = 0.0;
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                acc += p(g, a, b) * xi.xi[g] * xi.xi[a] * xi.xi[b];
    return acc;
}

// Deterministic sphere sample: 4096-point Fibonacci lattice plus 1024 seeded
// pseudo-random directions. The restricted contraction is a cubic polynomial
// in omega, so this density detects any nonzero violation far above tolerance.
inline std::vector<std::array<double, 3>> null_validation_directions() {
    std::vector<std::array<double, 3>> dirs;
    const std::size_t n_lattice = 4096;
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    dirs.reserve(n_lattice + 1024);
    for (std::size_t i = 0; i < n_lattice; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n_lattice);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    std::mt19937_64 rng(0x6e756c6cULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < 1024; ++i) {
        double x, y, z, r;
        do {
            x = gauss(rng);
            y = gauss(rng);
            z = gauss(rng);
            r = std::sqrt(x * x + y * y + z * z);
        } while (r < 1e-6);
        dirs.push_back({x / r, y / r, z / r});
    }
    return dirs;
}

inline NullCertificate validate_null_condition(const NullFormTensor& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("validate_null_condition: tol must be positive");
    NullCertificate cert;
    for (const auto& omega : null_validation_directions()) {
        const double val = std::abs(contract(p, NullVector::from_direction(omega)));
        cert.max_violation = std::max(cert.max_violation, val);
        ++cert.sample_count;
    }
    cert.passed = cert.max_violation <= tol;
    return cert;
}

// Q_P(u, v) = P^{gab} d_g u d_a d_b v on pointwise jets.
inline double evaluate_qp(const NullFormTensor& p, const Jet& du, const Jet& ddv) {
    double acc = 0.0;
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                acc += p(g, a, b) * du.first(g) * ddv.second(a, b);
    return acc;
}

// Q_0(u, v) = d^a u d_a v with the Minkowski raising.
inline double evaluate_q0(const Jet& du, const Jet& dv) {
    return -du.d1[0] * dv.d1[0] + du.d1[1] * dv.d1[1] + du.d1[2] * dv.d1[2] + du.d1[3] * dv.d1[3];
}

// One term of the good-derivative rewriting of Q_P at direction omega.
//   kGoodFirst:  coeff * G_c u * d_a d_b v
//   kGoodSecond: coeff * d_t u * G_a d_b v
struct DecompositionTerm {
    enum Kind { kGoodFirst, kGoodSecond } kind;
    std::size_t c;      // spatial index of the G factor (1..3)
    std::size_t alpha;  // remaining second-derivative indices (0..3)
    std::size_t beta;
    double coeff;
};

struct DecompositionReport {
    std::vector<DecompositionTerm> terms;
    double residual = 0.0;  // coefficient of the pure d_t u d_t^2 v remainder
    double c_omega = 0.0;   // sum of |coeff| over good terms
};

// Rewrites Q_P via d_a = G_a - omega_a d_t. The pure d_t u d_t^2 v remainder
// collects exactly contract(P, (1, -omega)), hence vanishes for null P.
inline DecompositionReport good_decomposition(const NullFormTensor& p, const std::array<double, 3>& omega,
                                              double null_tol = 1e-10) {
    const double norm = std::sqrt(omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("good_decomposition: omega must be a unit vector");
    if (!p.is_zero()) {
        const NullCertificate cert = validate_null_condition(p, null_tol);
        if (!cert.passed)
            throw std::runtime_error("good_decomposition: tensor violates the null condition (max " +
                                     std::to_string(cert.max_violation) + ")");
    }

    DecompositionReport rep;
    auto w = [&omega](std::size_t a) { return omega[a - 1]; };

    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                const double p0 = p(g, a, b);
                if (p0 == 0.0) continue;
                double coeff = p0;
                // First factor: d_c u = G_c u - omega_c d_t u.
                if (g != 0) {
                    rep.terms.push_back({DecompositionTerm::kGoodFirst, g, a, b, coeff});
                    coeff *= -w(g);
                }
                // Second factor, first slot.
                if (a != 0) {
                    rep.terms.push_back({DecompositionTerm::kGoodSecond, a, 0, b, coeff});
                    coeff *= -w(a);
                }
                // Second factor, second slot (d_t d_b v = G_b d_t v - omega_b d_t^2 v).
                if (b != 0) {
                    rep.terms.push_back({DecompositionTerm::kGoodSecond, b, 0, 0, coeff});
                    coeff *= -w(b);
                }
                rep.residual += coeff;
            }

    for (const auto& t : rep.terms) rep.c_omega += std::abs(t.coeff);
    return rep;
}

// Pointwise factors of the null-form bound |Q_P| <= C(omega)(|Gu||ddv| + |du||Gdv|).
inline double good_first_max(const std::array<double, 3>& omega, const Jet& u) {
    double m = 0.0;
    for (std::size_t a = 1; a <= 3; ++a)
        m = std::max(m, std::abs(omega[a - 1] * u.d1[0] + u.d1[a]));
    return m;
}

inline double first_deriv_max(const Jet& u) {
    double m = 0.0;
    for (double x : u.d1) m = std::max(m, std::abs(x));
    return m;
}

inline double second_deriv_max(const Jet& v) {
    double m = 0.0;
    for (double x : v.d2) m = std::max(m, std::abs(x));
    return m;
}

inline double good_second_max(const std::array<double, 3>& omega, const Jet& v) {
    double m = 0.0;
    for (std::size_t a = 1; a <= 3; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            m = std::max(m, std::abs(omega[a - 1] * v.second(0, b) + v.second(a, b)));
    return m;
}

// Text format: 64 whitespace-separated reals in row-major (g, a, b) order.
inline NullFormTensor load_tensor_text(std::istream& in, double* asymmetry_out = nullptr) {
    std::array<double, 64> raw{};
    for (std::size_t i = 0; i < 64; ++i) {
        if (!(in >> raw[i])) throw std::runtime_error("tensor file: expected 64 reals, got " + std::to_string(i));
    }
    return NullFormTensor::from_values(raw, asymmetry_out);
}

inline NullFormTensor load_tensor_file(const std::string& path, double* asymmetry_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tensor file: " + path);
    return load_tensor_text(in, asymmetry_out);
}

inline void save_tensor_text(std::ostream& out, const NullFormTensor& p) {
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) out << (b ? " " : "") << p(g, a, b);
            out << "\n";
        }
}

}  // namespace nullwave
