#pragma once

#include <cmath>
#include <vector>

#include "nullwave/norms.hpp"
#include "nullwave/solver.hpp"

namespace nullwave {

// Manufactured solution w*(t,x) = A cos(t) exp(-r^2 / (2 sigma^2)) for the
// semilinear closure (P = 0, Q0 on): w_tt = lap w + Q0(w, w) + f with the
// compensating source
//   f = w*_tt - lap w* + w*_t^2 - |grad w*|^2.
struct MmsTarget {
    double sigma = 2.0;
    double amplitude = 0.1;

    double phi(double r2) const { return std::exp(-0.5 * r2 / (sigma * sigma)); }

    void state_at(double t, FieldState& s) const {
        const double c = std::cos(t), sn = std::sin(t);
        s.w.fill([&](double x, double y, double z) {
            return amplitude * c * phi(x * x + y * y + z * z);
        });
        s.v.fill([&](double x, double y, double z) {
            return -amplitude * sn * phi(x * x + y * y + z * z);
        });
        s.t = t;
    }

    SourceFn source() const {
        const double sg = sigma, A = amplitude;
        return [sg, A](double t, ScalarField& out) {
            const double c = std::cos(t), sn = std::sin(t);
            const double s2 = sg * sg;
            out.fill([&](double x, double y, double z) {
                const double r2 = x * x + y * y + z * z;
                const double p = std::exp(-0.5 * r2 / s2);
                const double wtt = -A * c * p;
                const double lap = A * c * p * (r2 / (s2 * s2) - 3.0 / s2);
                const double q0 = -A * A * sn * sn * p * p + A * A * c * c * r2 * p * p / (s2 * s2);
                return wtt - lap - q0;
            });
        };
    }
};

struct MmsResult {
    std::vector<double> dts;
    std::vector<double> errors;  // L2 error of w at t_end
    std::vector<double> orders;  // log2(e_i / e_{i+1})
    double observed_order = 0.0;  // from the middle halving, clear of the floor
    double spatial_floor = 0.0;   // error at the finest dt
};

inline double mms_error(const Grid3& g, const MmsTarget& target, double t_end, double dt) {
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    target.state_at(0.0, s);
    const NullFormTensor P;  // zero
    RhsOptions opts;
    opts.dealias = false;  // keep the analytic source unfiltered
    opts.q0 = true;
    opts.source = target.source();
    const long steps = std::lround(t_end / dt);
    for (long k = 0; k < steps; ++k) s = step_rk4(s, P, dt, opts);

    FieldState exact{ScalarField(g), ScalarField(g), 0.0};
    target.state_at(s.t, exact);
    ScalarField diff(g);
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = s.w[i] - exact.w[i];
    return l2_norm(diff);
}

inline MmsResult mms_convergence(std::size_t n = 64, double half_width = 16.0,
                                 std::vector<double> dts = {0.1, 0.05, 0.025, 0.0125},
                                 double t_end = 1.0, const MmsTarget& target = MmsTarget{}) {
    const Grid3 g(n, half_width);
    MmsResult res;
    res.dts = dts;
    for (double dt : dts) res.errors.push_back(mms_error(g, target, t_end, dt));
    for (std::size_t i = 0; i + 1 < res.errors.size(); ++i)
        res.orders.push_back(std::log2(res.errors[i] / res.errors[i + 1]));
    if (!res.orders.empty()) res.observed_order = res.orders[res.orders.size() / 2];
    res.spatial_floor = res.errors.back();
    return res;
}

}  // namespace nullwave
