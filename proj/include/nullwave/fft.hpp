#pragma once

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "nullwave/grid.hpp"

namespace nullwave {

// Half-complex spectrum of a real field (r2c layout, x axis halved).
struct SpectralField {
    Grid3 grid;
    std::vector<std::complex<double>> c;  // size n * n * (n/2 + 1)

    SpectralField() = default;
    explicit SpectralField(const Grid3& g) : grid(g), c(g.n * g.n * (g.n / 2 + 1)) {}

    std::size_t nx() const { return grid.n / 2 + 1; }
    std::size_t index(std::size_t mx, std::size_t iy, std::size_t iz) const {
        return mx + nx() * (iy + grid.n * iz);
    }
};

inline int fft_thread_count() {
    if (const char* env = std::getenv("NULLWAVE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? static_cast<int>(hw) : 1;
}

// FFTW plans and aligned buffers for one grid. Plans use FFTW_ESTIMATE so the
// chosen algorithm, and hence bit-level output, is reproducible.
class SpectralOps {
  public:
    explicit SpectralOps(const Grid3& g) : grid_(g) {
        const std::size_t n = g.n;
        real_ = fftw_alloc_real(n * n * n);
        cplx_ = fftw_alloc_complex(n * n * (n / 2 + 1));
        if (!real_ || !cplx_) throw std::bad_alloc();
        const int ni = static_cast<int>(n);
        fwd_ = fftw_plan_dft_r2c_3d(ni, ni, ni, real_, cplx_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_3d(ni, ni, ni, cplx_, real_, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("SpectralOps: FFTW plan creation failed");
    }

    ~SpectralOps() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }

    SpectralOps(const SpectralOps&) = delete;
    SpectralOps& operator=(const SpectralOps&) = delete;

    const Grid3& grid() const { return grid_; }

    SpectralField forward(const ScalarField& f) {
        check(f.grid());
        const std::size_t total = grid_.size();
        for (std::size_t i = 0; i < total; ++i) real_[i] = f[i];
        fftw_execute(fwd_);
        SpectralField out(grid_);
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = {cplx_[i][0], cplx_[i][1]};
        return out;
    }

    ScalarField backward(const SpectralField& s) {
        check(s.grid);
        for (std::size_t i = 0; i < s.c.size(); ++i) {
            cplx_[i][0] = s.c[i].real();
            cplx_[i][1] = s.c[i].imag();
        }
        fftw_execute(bwd_);
        ScalarField out(grid_);
        const double scale = 1.0 / static_cast<double>(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = real_[i] * scale;
        return out;
    }

    // Signed mode number along an axis for a storage index.
    long mode(std::size_t storage_index) const {
        const long n = static_cast<long>(grid_.n);
        const long i = static_cast<long>(storage_index);
        return i <= n / 2 ? i : i - n;
    }

    double wavenumber(long m) const { return grid_.dk() * static_cast<double>(m); }

    // Applies a multiplier lambda(kx, ky, kz, is_nyquist) in place.
    template <class F>
    void apply_multiplier(SpectralField& s, F&& f) const {
        const std::size_t n = grid_.n;
        const std::size_t half = n / 2;
        for (std::size_t iz = 0; iz < n; ++iz) {
            const long mz = mode(iz);
            for (std::size_t iy = 0; iy < n; ++iy) {
                const long my = mode(iy);
                for (std::size_t mx = 0; mx <= half; ++mx) {
                    const bool nyq = (mx == half) || (iy == half) || (iz == half);
                    f(s.c[s.index(mx, iy, iz)], wavenumber(static_cast<long>(mx)), wavenumber(my),
                      wavenumber(mz), nyq);
                }
            }
        }
    }

    // d/dx_axis of the trigonometric interpolant; Nyquist modes zeroed.
    void derivative_spec(SpectralField& s, int axis) const {
        apply_multiplier(s, [axis](std::complex<double>& c, double kx, double ky, double kz, bool nyq) {
            if (nyq) {
                c = 0.0;
                return;
            }
            const double k = axis == 0 ? kx : (axis == 1 ? ky : kz);
            c *= std::complex<double>(0.0, k);
        });
    }

    void laplacian_spec(SpectralField& s) const {
        apply_multiplier(s, [](std::complex<double>& c, double kx, double ky, double kz, bool nyq) {
            if (nyq) {
                c = 0.0;
                return;
            }
            c *= -(kx * kx + ky * ky + kz * kz);
        });
    }

    // 2/3-rule mask: zero all modes with |m| > n/3 on any axis.
    void dealias_spec(SpectralField& s) const {
        const double k_cut = grid_.dk() * (static_cast<double>(grid_.n) / 3.0);
        apply_multiplier(s, [k_cut](std::complex<double>& c, double kx, double ky, double kz, bool) {
            if (std::abs(kx) > k_cut || std::abs(ky) > k_cut || std::abs(kz) > k_cut) c = 0.0;
        });
    }

    ScalarField derivative(const ScalarField& f, int axis) {
        SpectralField s = forward(f);
        derivative_spec(s, axis);
        return backward(s);
    }

    ScalarField laplacian(const ScalarField& f) {
        SpectralField s = forward(f);
        laplacian_spec(s);
        return backward(s);
    }

    ScalarField dealias(const ScalarField& f) {
        SpectralField s = forward(f);
        dealias_spec(s);
        return backward(s);
    }

  private:
    void check(const Grid3& g) const {
        if (g != grid_) throw std::invalid_argument("SpectralOps: grid mismatch");
    }

    Grid3 grid_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// Per-grid plan cache. Single logical thread of control per process.
inline SpectralOps& spectral_ops(const Grid3& g) {
    static std::map<std::pair<std::size_t, double>, std::unique_ptr<SpectralOps>> cache;
    auto key = std::make_pair(g.n, g.half_width);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<SpectralOps>(g)).first;
    return *it->second;
}

inline ScalarField spectral_derivative(const ScalarField& f, int axis) {
    return spectral_ops(f.grid()).derivative(f, axis);
}

}  // namespace nullwave
