#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nullwave/reduction.hpp"

namespace nullwave {

// Uniform periodic cube [-L, L)^3 with n points per axis, x-fastest layout.
struct Grid3 {
    std::size_t n = 0;
    double half_width = 0.0;

    Grid3() = default;
    Grid3(std::size_t n_, double half_width_) : n(n_), half_width(half_width_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid3: n must be a power of two >= 8, got " + std::to_string(n));
        if (!(half_width > 0.0))
            throw std::invalid_argument("Grid3: half_width must be positive");
    }

    double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
    std::size_t size() const { return n * n * n; }
    double cell_volume() const { const double h = spacing(); return h * h * h; }

    // coordinate of index i along any axis: -L, -L+h, ..., L-h
    double coord(std::size_t i) const { return -half_width + spacing() * static_cast<double>(i); }

    // Fundamental wavenumber pi/L; mode m in [-n/2, n/2) carries k = m*pi/L.
    double dk() const { return M_PI / half_width; }

    std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return ix + n * (iy + n * iz);
    }

    bool operator==(const Grid3& o) const { return n == o.n && half_width == o.half_width; }
    bool operator!=(const Grid3& o) const { return !(*this == o); }
};

class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid3& g) : grid_(g), values_(g.size(), 0.0) {}
    ScalarField(const Grid3& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
        if (values_.size() != g.size()) throw std::invalid_argument("ScalarField: value count mismatch");
    }

    const Grid3& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t ix, std::size_t iy, std::size_t iz) { return values_[grid_.index(ix, iy, iz)]; }
    double at(std::size_t ix, std::size_t iy, std::size_t iz) const { return values_[grid_.index(ix, iy, iz)]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // Fill from f(x1, x2, x3).
    template <class F>
    void fill(F&& f) {
        const std::size_t n = grid_.n;
        for (std::size_t iz = 0; iz < n; ++iz) {
            const double z = grid_.coord(iz);
            for (std::size_t iy = 0; iy < n; ++iy) {
                const double y = grid_.coord(iy);
                std::size_t base = grid_.index(0, iy, iz);
                for (std::size_t ix = 0; ix < n; ++ix)
                    values_[base + ix] = f(grid_.coord(ix), y, z);
            }
        }
    }

  private:
    Grid3 grid_;
    std::vector<double> values_;
};

// The evolution unknown: (w, v = dt w) at time t on a shared grid.
struct FieldState {
    ScalarField w;
    ScalarField v;
    double t = 0.0;

    FieldState() = default;
    FieldState(ScalarField w_, ScalarField v_, double t_) : w(std::move(w_)), v(std::move(v_)), t(t_) {
        if (w.grid() != v.grid()) throw std::invalid_argument("FieldState: w and v must share one grid");
    }

    const Grid3& grid() const { return w.grid(); }
};

// Smallest R with |w|, |v| below threshold outside radius R.
inline double support_radius(const FieldState& s, double threshold) {
    const Grid3& g = s.grid();
    double r_max = 0.0;
    const std::size_t n = g.n;
    for (std::size_t iz = 0; iz < n; ++iz) {
        const double z = g.coord(iz);
        for (std::size_t iy = 0; iy < n; ++iy) {
            const double y = g.coord(iy);
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                if (std::abs(s.w[i]) >= threshold || std::abs(s.v[i]) >= threshold) {
                    const double x = g.coord(ix);
                    r_max = std::max(r_max, std::sqrt(x * x + y * y + z * z));
                }
            }
        }
    }
    return r_max;
}

}  // namespace nullwave
