#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "nullwave/fft.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/jet.hpp"
#include "nullwave/tensor.hpp"

namespace nullwave {

// How second time derivatives are closed when a jet or a Gamma application
// needs them: the free wave equation, or the full quasilinear equation.
struct Closure {
    enum Kind { kFree, kTensor } kind = kFree;
    NullFormTensor tensor;
    bool q0_enabled = true;

    static Closure free() { return {}; }
    static Closure with_tensor(const NullFormTensor& p, bool q0 = true) { return {kTensor, p, q0}; }
};

struct HyperbolicityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All spatial derivative fields of a state plus the closed d_t^2 w, computed
// with two forward transforms and one inverse per derived field.
class JetBundle {
  public:
    JetBundle(const FieldState& state, const Closure& closure) : grid_(state.grid()) {
        SpectralOps& ops = spectral_ops(grid_);
        SpectralField ws = ops.forward(state.w);
        SpectralField vs = ops.forward(state.v);

        for (int a = 0; a < 3; ++a) {
            SpectralField d = ws;
            ops.derivative_spec(d, a);
            dw_[a] = ops.backward(d);
            d = vs;
            ops.derivative_spec(d, a);
            dv_[a] = ops.backward(d);
        }
        static constexpr std::array<std::pair<int, int>, 6> pairs = {
            {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
        for (std::size_t p = 0; p < 6; ++p) {
            SpectralField d = ws;
            const auto [a, b] = pairs[p];
            ops.apply_multiplier(d, [a, b](std::complex<double>& c, double kx, double ky, double kz, bool nyq) {
                if (nyq) {
                    c = 0.0;
                    return;
                }
                const double k[3] = {kx, ky, kz};
                c *= -k[a] * k[b];
            });
            d2w_[p] = ops.backward(d);
        }

        v_ = state.v;
        wtt_ = ScalarField(grid_);
        compute_wtt(closure);
    }

    // Pointwise jet; d1 = (v, grad w), d2 closed per the chosen closure.
    Jet at(std::size_t i) const {
        Jet j;
        j.d1 = {v_[i], dw_[0][i], dw_[1][i], dw_[2][i]};
        j.d2[sym_index(0, 0)] = wtt_[i];
        for (std::size_t a = 1; a <= 3; ++a) j.d2[sym_index(0, a)] = dv_[a - 1][i];
        // d2w_ order: xx, xy, xz, yy, yz, zz
        j.d2[sym_index(1, 1)] = d2w_[0][i];
        j.d2[sym_index(1, 2)] = d2w_[1][i];
        j.d2[sym_index(1, 3)] = d2w_[2][i];
        j.d2[sym_index(2, 2)] = d2w_[3][i];
        j.d2[sym_index(2, 3)] = d2w_[4][i];
        j.d2[sym_index(3, 3)] = d2w_[5][i];
        return j;
    }

    const ScalarField& dw(int a) const { return dw_[a]; }
    const ScalarField& dv(int a) const { return dv_[a]; }
    const ScalarField& wtt() const { return wtt_; }
    double laplacian_at(std::size_t i) const { return d2w_[0][i] + d2w_[3][i] + d2w_[5][i]; }

    // min over the grid of 1 - P^{g00} d_g w (1 when the closure is free).
    double hyperbolicity_margin() const { return margin_; }

  private:
    void compute_wtt(const Closure& closure) {
        const std::size_t total = grid_.size();
        margin_ = 1.0;
        if (closure.kind == Closure::kFree) {
            for (std::size_t i = 0; i < total; ++i) wtt_[i] = laplacian_at(i);
            return;
        }
        const NullFormTensor& P = closure.tensor;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < total; ++i) {
            const double coef = hyperbolicity_coef(P, i);
            if (coef < margin_) {
                margin_ = coef;
                worst = i;
            }
            wtt_[i] = quasilinear_rhs(P, closure.q0_enabled, i) / coef;
        }
        if (margin_ < 0.5)
            throw HyperbolicityError("hyperbolicity margin " + std::to_string(margin_) +
                                     " < 0.5 at grid index " + std::to_string(worst));
    }

    double hyperbolicity_coef(const NullFormTensor& P, std::size_t i) const {
        double s = P(0, 0, 0) * v_[i];
        for (std::size_t c = 1; c <= 3; ++c) s += P(c, 0, 0) * dw_[c - 1][i];
        return 1.0 - s;
    }

    // Delta w + Q_P terms excluding (alpha,beta)=(0,0) + Q_0, the numerator of
    // the pointwise solve for d_t^2 w.
    double quasilinear_rhs(const NullFormTensor& P, bool q0_on, std::size_t i) const {
        double acc = laplacian_at(i);
        const double du[4] = {v_[i], dw_[0][i], dw_[1][i], dw_[2][i]};
        // 2 P^{g a 0} d_g w d_a v
        for (std::size_t g = 0; g < 4; ++g)
            for (std::size_t a = 1; a <= 3; ++a) acc += 2.0 * P(g, a, 0) * du[g] * dv_[a - 1][i];
        // P^{g a b} d_g w d_a d_b w
        static constexpr std::size_t pair_index[4][4] = {
            {0, 0, 0, 0}, {0, 0, 1, 2}, {0, 1, 3, 4}, {0, 2, 4, 5}};
        for (std::size_t g = 0; g < 4; ++g)
            for (std::size_t a = 1; a <= 3; ++a)
                for (std::size_t b = 1; b <= 3; ++b)
                    acc += P(g, a, b) * du[g] * d2w_[pair_index[a][b]][i];
        if (q0_on) {
            double q0 = -v_[i] * v_[i];
            for (int a = 0; a < 3; ++a) q0 += dw_[a][i] * dw_[a][i];
            acc += q0;
        }
        return acc;
    }

    Grid3 grid_;
    std::array<ScalarField, 3> dw_;
    std::array<ScalarField, 3> dv_;
    std::array<ScalarField, 6> d2w_;  // xx, xy, xz, yy, yz, zz
    ScalarField v_;
    ScalarField wtt_;
    double margin_ = 1.0;
};

inline Jet jet_at(const FieldState& state, std::size_t index, const Closure& closure) {
    return JetBundle(state, closure).at(index);
}

}  // namespace nullwave
