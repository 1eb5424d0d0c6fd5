#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nullwave/norms.hpp"

namespace nullwave {

namespace detail {

template <class F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

// Alinhac's ghost weight q(rho) = int_{-inf}^{rho} <s>^{-1-2 delta} ds,
// tabulated on a uniform grid with cubic interpolation. The substitution
// s = sinh(theta) turns the slowly decaying tail into an exponential one, so
// truncating theta at a depth set by delta keeps the remainder below 1e-14.
class GhostWeight {
  public:
    explicit GhostWeight(double delta, double rho_min = -64.0, double rho_max = 64.0,
                         std::size_t points = 1 << 14)
        : delta_(delta), rho_min_(rho_min), rho_max_(rho_max), table_(points) {
        if (!(delta > 0.0)) throw std::invalid_argument("GhostWeight: delta must be positive");
        step_ = (rho_max_ - rho_min_) / static_cast<double>(points - 1);
        for (std::size_t i = 0; i < points; ++i) table_[i] = integrate(rho_min_ + step_ * static_cast<double>(i));
        q_max_ = 2.0 * integrate(0.0);  // integrand is even
    }

    double delta() const { return delta_; }
    double q_max() const { return q_max_; }

    double q(double rho) const {
        if (rho <= rho_min_ || rho >= rho_max_) return integrate(rho);
        const double u = (rho - rho_min_) / step_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i < 1) i = 1;
        if (i > table_.size() - 3) i = table_.size() - 3;
        const double s = u - static_cast<double>(i);
        // 4-point Lagrange on uniform nodes i-1 .. i+2
        const double y0 = table_[i - 1], y1 = table_[i], y2 = table_[i + 1], y3 = table_[i + 2];
        return y1 + s * (0.5 * (y2 - y0) +
                         s * (y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3 +
                              s * (0.5 * (y3 - y0) + 1.5 * (y1 - y2))));
    }

    double exp_q(double rho) const { return std::exp(q(rho)); }

  private:
    double integrate(double rho) const {
        // theta-space lower cutoff: cosh^{-2 delta}(theta) <= 2^{2d} e^{-2d|theta|}
        const double theta_hi = std::asinh(rho);
        const double theta_lo = std::min(theta_hi, -(std::log(1e15) + std::log(1.0 / (2.0 * delta_))) /
                                                       (2.0 * delta_) - 1.0);
        const double d = delta_;
        return detail::adaptive_simpson(
            [d](double theta) { return std::pow(std::cosh(theta), -2.0 * d); }, theta_lo, theta_hi, 1e-13);
    }

    double delta_;
    double rho_min_;
    double rho_max_;
    double step_ = 0.0;
    double q_max_ = 0.0;
    std::vector<double> table_;
};

}  // namespace nullwave
