#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vmrf/error.hpp"
#include "vmrf/volterra_kernels.hpp"

namespace {

using vmrf::HurstParam;
using vmrf::KernelSpec;

TEST(HurstParam, RejectsOutOfRange) {
    EXPECT_THROW(HurstParam(0.0), vmrf::Error);
    EXPECT_THROW(HurstParam(1.0), vmrf::Error);
    EXPECT_THROW(HurstParam(std::nan("")), vmrf::Error);
    EXPECT_TRUE(HurstParam(0.5).is_brownian());
}

TEST(NormalizationConstant, MatchesGammaFormula) {
    for (double H : {0.1, 0.25, 0.3, 0.45, 0.55, 0.7, 0.75, 0.9})
        EXPECT_NEAR(vmrf::normalization_constant(HurstParam(H)), vmrf_test::c_h(H), 1e-13) << H;
}

TEST(NormalizationConstant, FrozenValues) {
    EXPECT_NEAR(vmrf::normalization_constant(HurstParam(0.75)), 0.26741115875799759, 1e-15);
    EXPECT_NEAR(vmrf::normalization_constant(HurstParam(0.25)), 0.645998003740752, 1e-14);
    EXPECT_NEAR(vmrf::normalization_constant(HurstParam(0.3)), 0.73028293407992284, 1e-15);
    EXPECT_NEAR(vmrf::normalization_constant(HurstParam(0.499)), 0.998997857411109078, 1e-14);
    EXPECT_NEAR(vmrf::normalization_constant(HurstParam(0.501)), 0.00100099785271712, 1e-16);
}

TEST(NormalizationConstant, DegenerateAtHalf) {
    try {
        vmrf::normalization_constant(HurstParam(0.5));
        FAIL();
    } catch (const vmrf::Error& e) {
        EXPECT_EQ(e.code(), vmrf::ErrorCode::degenerate_kernel);
    }
}

TEST(KernelK, FrozenValues) {
    EXPECT_NEAR(vmrf::kernel_K(KernelSpec::fbm(0.7), 1.0, 0.5), 0.977140497393616760, 1e-12);
    EXPECT_NEAR(vmrf::kernel_K(KernelSpec::fbm(0.3), 1.0, 0.5), 0.873014114338668055, 1e-12);
}

TEST(KernelK, MatchesSimpsonOracle) {
    for (double H : {0.2, 0.3, 0.45, 0.6, 0.8}) {
        const auto spec = KernelSpec::fbm(H);
        for (double t : {0.4, 1.0})
            for (double s : {0.05, 0.2, 0.35}) {
                const double expected = vmrf_test::fbm_kernel(H, t, s);
                EXPECT_NEAR(vmrf::kernel_K(spec, t, s), expected, 1e-9 * std::max(1.0, std::abs(expected)))
                    << "H=" << H << " t=" << t << " s=" << s;
            }
    }
}

TEST(KernelK, ZeroAboveDiagonalAndBrownian) {
    const auto spec = KernelSpec::fbm(0.3);
    EXPECT_EQ(vmrf::kernel_K(spec, 0.4, 0.4), 0.0);
    EXPECT_EQ(vmrf::kernel_K(spec, 0.4, 0.6), 0.0);
    EXPECT_EQ(vmrf::kernel_K(KernelSpec::fbm(0.5), 0.7, 0.2), 1.0);
    EXPECT_EQ(vmrf::kernel_L(KernelSpec::fbm(0.5), 0.7, 0.2), 1.0);
}

TEST(KernelK, ApproachesBrownianKernelNearHalf) {
    for (double H : {0.499, 0.501}) {
        const auto spec = KernelSpec::fbm(H);
        for (double t : {0.5, 1.0})
            for (double s : {0.1, 0.3}) EXPECT_NEAR(vmrf::kernel_K(spec, t, s), 1.0, 1e-2) << H;
    }
}

TEST(KernelK, GapFormAgreesNearDiagonal) {
    const auto spec = KernelSpec::fbm(0.7);
    const double s = 0.6, gap = 1e-3;
    EXPECT_NEAR(vmrf::kernel_K_gap(spec, s, gap), vmrf::kernel_K(spec, s + gap, s), 1e-10);
}

TEST(KernelK, RejectsTimesBeyondHorizon) {
    const auto spec = KernelSpec::fbm(0.3, 1.0);
    EXPECT_THROW(vmrf::kernel_K(spec, 1.5, 0.2), vmrf::Error);
    EXPECT_THROW(vmrf::kernel_K(spec, 0.5, -0.1), vmrf::Error);
}

TEST(KernelL, FrozenValues) {
    EXPECT_NEAR(vmrf::kernel_L(KernelSpec::fbm(0.3), 1.0, 0.5), 4.24000996070875962, 1e-11);
    EXPECT_NEAR(vmrf::kernel_L(KernelSpec::fbm(0.7), 1.0, 0.5), 1.0988232368390897132, 1e-12);
}

TEST(KernelL, MatchesSimpsonOracle) {
    for (double H : {0.2, 0.35, 0.65, 0.8}) {
        const auto spec = KernelSpec::fbm(H);
        for (double s : {0.1, 0.5, 0.9}) {
            const double expected = vmrf_test::fbm_inverse_kernel(H, 1.0, s);
            EXPECT_NEAR(vmrf::kernel_L(spec, 1.0, s), expected, 1e-9 * std::max(1.0, std::abs(expected)))
                << "H=" << H << " s=" << s;
        }
    }
}

TEST(Covariance, ClosedFormForFbm) {
    const auto spec = KernelSpec::fbm(0.3);
    const double t = 0.8, s = 0.3, H = 0.3;
    const double expected = 0.5 * (std::pow(t, 2 * H) + std::pow(s, 2 * H) - std::pow(t - s, 2 * H));
    EXPECT_NEAR(vmrf::covariance_R(spec, t, s), expected, 1e-15);
    EXPECT_NEAR(vmrf::covariance_R(spec, s, t), expected, 1e-15);
}

TEST(Isometry, ResidualIsSmallOnInteriorGrid) {
    const vmrf::QuadratureSpec quad{64, 1e-10, 10};
    for (double H : {0.25, 0.75}) {
        const auto spec = KernelSpec::fbm(H);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= i; ++j) {
                const double t = i / 4.0, s = j / 4.0;
                EXPECT_LT(vmrf::isometry_residual(spec, t, s, quad), 1e-8) << "H=" << H << " t=" << t << " s=" << s;
            }
    }
}

vmrf::MishuraKernel fbm_as_mishura(double H) {
    const double cH = vmrf::normalization_constant(HurstParam(H));
    vmrf::MishuraKernel k;
    k.a = vmrf::power_function(cH, 0.5 - H);
    k.a_prime = vmrf::power_function(cH * (0.5 - H), -0.5 - H);
    k.b = vmrf::power_function(1.0, H - 0.5);
    k.c = vmrf::power_function(1.0, H - 1.5);
    const double sonine = std::numbers::pi / std::sin(std::numbers::pi * (H - 0.5));
    k.h = vmrf::power_function(1.0 / sonine, 0.5 - H);
    return k;
}

TEST(Mishura, SonineNormalization) {
    const auto k = fbm_as_mishura(0.7);
    const vmrf::QuadratureSpec quad{32, 1e-12, 10};
    EXPECT_LT(vmrf::sonine_residual(k.c, k.h, 1.0, quad), 1e-10);
    EXPECT_LT(vmrf::sonine_residual(k.c, k.h, 0.5, quad), 1e-10);
}

TEST(Mishura, ReproducesFbmKernels) {
    const double H = 0.7;
    const auto k = fbm_as_mishura(H);
    const auto spec = KernelSpec::fbm(H);
    for (double s : {0.2, 0.5, 0.8}) {
        EXPECT_NEAR(vmrf::mishura_K(k, 1.0, s), vmrf::kernel_K(spec, 1.0, s), 1e-9) << s;
    }
    // mishura_L with a carrying c_H and h carrying 1/sonine differs from the
    // unnormalized fBm L by the product of the two scalings.
    const double cH = vmrf::normalization_constant(HurstParam(H));
    const double sonine = std::numbers::pi / std::sin(std::numbers::pi * (H - 0.5));
    for (double s : {0.2, 0.5, 0.8})
        EXPECT_NEAR(vmrf::mishura_L(k, 1.0, s) * cH * sonine, vmrf::kernel_L(spec, 1.0, s), 1e-9) << s;
}

TEST(Mishura, RejectsExcessiveIntegrabilityExponents) {
    auto k = fbm_as_mishura(0.7);
    k.p = k.q = k.r = 1.5;
    EXPECT_THROW(KernelSpec(k, 1.0), vmrf::Error);
}

}  // namespace
