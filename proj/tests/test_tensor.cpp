#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "nullwave/identities.hpp"
#include "nullwave/tensor.hpp"

using namespace nullwave;

namespace {

// independent brute-force oracle: raw triple loop over an unsymmetrized array
double oracle_contract(const std::array<double, 64>& raw, const std::array<double, 4>& xi) {
    double acc = 0.0;
    for (int g = 0; g < 4; ++g)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) acc += raw[(g * 4 + a) * 4 + b] * xi[g] * xi[a] * xi[b];
    return acc;
}

std::array<double, 64> random_raw(unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 64> raw;
    for (auto& x : raw) x = u(rng);
    return raw;
}

}  // namespace

TEST(Tensor, ZeroContractsToZero) {
    const NullFormTensor p;
    EXPECT_EQ(contract(p, NullVector{{1.0, -0.3, 0.5, 0.2}}), 0.0);
}

TEST(Tensor, Bad000GivesXiCubed) {
    const NullFormTensor p = NullFormTensor::bad_000();
    for (const auto& omega : {std::array<double, 3>{1, 0, 0}, {0.6, 0.8, 0.0}}) {
        EXPECT_DOUBLE_EQ(contract(p, NullVector::from_direction(omega)), 1.0);
    }
}

TEST(Tensor, McFamilyKnownValueMinus12) {
    // c=(1,0,0,0), xi=(2,0,0,1): 2 (m^{ga} xi_g xi_a)(c . xi) = 2 (-4+1) 2 = -12
    const NullFormTensor p = NullFormTensor::mc_family({1.0, 0.0, 0.0, 0.0});
    EXPECT_NEAR(contract(p, NullVector{{2.0, 0.0, 0.0, 1.0}}), -12.0, 1e-12);
}

TEST(Tensor, ContractMatchesBruteForceOracle) {
    const auto raw = random_raw(11);
    const NullFormTensor p = NullFormTensor::from_values(raw);
    const std::array<double, 4> xi = {0.7, -1.1, 0.4, 2.0};
    // symmetrization preserves the contraction (xi_a xi_b symmetric)
    EXPECT_NEAR(contract(p, NullVector{xi}), oracle_contract(raw, xi), 1e-12);
}

TEST(Tensor, ContractIsTrilinear) {
    const auto raw = random_raw(12);
    const NullFormTensor p = NullFormTensor::from_values(raw);
    NullVector xi{{0.3, 0.9, -0.4, 0.8}};
    NullVector xi2 = xi;
    for (auto& x : xi2.xi) x *= 2.0;
    EXPECT_NEAR(contract(p, xi2), 8.0 * contract(p, xi), 1e-12);
}

TEST(Tensor, SymmetrizationIdempotent) {
    const auto raw = random_raw(13);
    double asym = 0.0;
    const NullFormTensor p = NullFormTensor::from_values(raw, &asym);
    EXPECT_GT(asym, 0.0);
    for (int g = 0; g < 4; ++g)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) EXPECT_EQ(p(g, a, b), p(g, b, a));
}

TEST(Tensor, ValidatorCertifiesPresets) {
    EXPECT_TRUE(validate_null_condition(NullFormTensor::zero(), 1e-12).passed);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 5; ++k) {
        const NullFormTensor p = NullFormTensor::mc_family({u(rng), u(rng), u(rng), u(rng)});
        const auto cert = validate_null_condition(p, 1e-12);
        EXPECT_TRUE(cert.passed) << "violation " << cert.max_violation;
    }
    const auto bad = validate_null_condition(NullFormTensor::bad_000(), 1e-10);
    EXPECT_FALSE(bad.passed);
    EXPECT_NEAR(bad.max_violation, 1.0, 1e-12);
}

TEST(Tensor, EvaluateQpMatchesOracle) {
    const auto raw = random_raw(14);
    const NullFormTensor p = NullFormTensor::from_values(raw);
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Jet du, ddv;
    for (auto& x : du.d1) x = u(rng);
    for (auto& x : ddv.d2) x = u(rng);
    double oracle = 0.0;
    for (int g = 0; g < 4; ++g)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) oracle += p(g, a, b) * du.first(g) * ddv.second(a, b);
    EXPECT_NEAR(evaluate_qp(p, du, ddv), oracle, 4e-16 * 64);
}

TEST(Tensor, EvaluateQ0Cases) {
    Jet u, v;
    u.d1 = {1, 0, 0, 0};
    v.d1 = {1, 0, 0, 0};
    EXPECT_EQ(evaluate_q0(u, v), -1.0);
    u.d1 = {1, 1, 0, 0};
    v.d1 = {1, 1, 0, 0};
    EXPECT_EQ(evaluate_q0(u, v), 0.0);
}

TEST(Tensor, DecompositionResidualEqualsContract) {
    const NullFormTensor p = NullFormTensor::mc_family({0.5, -0.2, 0.8, 0.1});
    const std::array<double, 3> omega = {0.6, 0.0, 0.8};
    const auto rep = good_decomposition(p, omega);
    EXPECT_NEAR(rep.residual, contract(p, NullVector::from_direction(omega)), 1e-13);
    EXPECT_LE(std::abs(rep.residual), 1e-12);
    EXPECT_GT(rep.c_omega, 0.0);
}

TEST(Tensor, DecompositionRejectsNonNull) {
    EXPECT_THROW(good_decomposition(NullFormTensor::bad_000(), {1.0, 0.0, 0.0}), std::runtime_error);
}

TEST(Tensor, NullFormBoundHolds) {
    const auto rep = null_form_bound_battery(NullFormTensor::mc_family({1, 0, 0, 0}), 16, 100, 77);
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_LE(rep.max_decomp_residual, 1e-12);
}

TEST(Tensor, TextRoundTrip) {
    const NullFormTensor p = NullFormTensor::mc_family({0.25, 1.0, -0.5, 2.0});
    std::stringstream ss;
    save_tensor_text(ss, p);
    const NullFormTensor q = load_tensor_text(ss);
    for (int g = 0; g < 4; ++g)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) EXPECT_EQ(p(g, a, b), q(g, a, b));
}
