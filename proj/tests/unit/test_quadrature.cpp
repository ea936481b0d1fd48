#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vmrf/error.hpp"
#include "vmrf/quadrature.hpp"
#include "vmrf/special_functions.hpp"

namespace {

using vmrf::QuadratureSpec;

double beta_via_tgamma(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }

TEST(SpecialFunctions, BetaMatchesGammaProducts) {
    for (double a : {0.25, 0.5, 0.75, 1.0, 2.5})
        for (double b : {0.2, 0.5, 1.0, 3.0}) EXPECT_NEAR(vmrf::beta_function(a, b), beta_via_tgamma(a, b), 1e-12 * beta_via_tgamma(a, b));
}

TEST(SpecialFunctions, BetaReflectionIdentity) {
    // B(x, 1 - x) = pi / sin(pi x)
    for (double x : {0.1, 0.25, 0.5, 0.9})
        EXPECT_NEAR(vmrf::beta_function(x, 1.0 - x), std::numbers::pi / std::sin(std::numbers::pi * x), 1e-12);
}

TEST(SpecialFunctions, RejectsNonPositiveArguments) {
    EXPECT_THROW(vmrf::beta_function(0.0, 1.0), vmrf::Error);
    EXPECT_THROW(vmrf::log_gamma(-1.0), vmrf::Error);
}

TEST(Quadrature, SpecValidation) {
    QuadratureSpec spec;
    spec.panels = 7;
    EXPECT_THROW(spec.validate(), vmrf::Error);
    spec.panels = 8;
    spec.abs_tol = 0.0;
    EXPECT_THROW(spec.validate(), vmrf::Error);
    spec.abs_tol = 1e-9;
    EXPECT_NO_THROW(spec.validate());
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
    const auto& rule = vmrf::gauss_legendre_unit(5);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 9);
    EXPECT_NEAR(sum, 0.1, 1e-15);
}

TEST(Quadrature, AlgebraicEndpointSingularities) {
    QuadratureSpec spec{32, 1e-12, 10};
    // int_0^1 x^{-0.75} (1-x)^{-0.25} dx = B(0.25, 0.75)
    const double both = vmrf::integrate_algebraic(
        [](double x) { return std::pow(x, -0.75) * std::pow(1.0 - x, -0.25); }, 0.0, 1.0, -0.75, -0.25, spec);
    EXPECT_NEAR(both, beta_via_tgamma(0.25, 0.75), 1e-10);
    // int_0^2 x^{-0.5} cos(x) dx, lower end only
    const double lower = vmrf::integrate_algebraic([](double x) { return std::cos(x) / std::sqrt(x); }, 0.0, 2.0, -0.5, 0.0, spec);
    EXPECT_NEAR(lower, 1.888249033694514, 1e-10);
}

TEST(Quadrature, OffsetIntegrandSeesExactEndpointDistances) {
    QuadratureSpec spec{16, 1e-12, 10};
    // Near hi = 1 + 1e-9 the product (hi - x)^{-0.5} must not be formed from hi - x.
    const double lo = 1.0, hi = 1.0 + 1e-9;
    const double value = vmrf::integrate_algebraic(
        vmrf::OffsetFunction([](double, double, double to_hi) { return std::pow(to_hi, -0.5); }), lo, hi, 0.0, -0.5, spec);
    EXPECT_NEAR(value / (2.0 * std::sqrt(hi - lo)), 1.0, 1e-6);
}

TEST(Quadrature, CheckedVariantReportsAchievedTolerance) {
    QuadratureSpec spec{8, 1e-30, 2};
    try {
        vmrf::integrate_algebraic_checked([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0, 0.0, 0.0, spec);
        FAIL() << "expected QuadFailure";
    } catch (const vmrf::QuadFailure& e) {
        EXPECT_EQ(e.code(), vmrf::ErrorCode::quad_failure);
        EXPECT_GT(e.achieved_tolerance(), 0.0);
    }
}

TEST(Quadrature, ShiftedPowerIntegralAgainstClosedForms) {
    const QuadratureSpec spec{16, 1e-12, 10};
    // alpha = 0: int_0^d v^beta dv
    EXPECT_NEAR(vmrf::shifted_power_integral(0.3, 2.0, 0.0, -0.4, spec), std::pow(2.0, 0.6) / 0.6, 1e-13);
    // s -> large relative to d, alpha = 1: int_0^d v^beta (s + v) dv
    const double s = 5.0, d = 1e-6, b = -0.8;
    const double exact = s * std::pow(d, b + 1) / (b + 1) + std::pow(d, b + 2) / (b + 2);
    EXPECT_NEAR(vmrf::shifted_power_integral(s, d, 1.0, b, spec) / exact, 1.0, 1e-13);
    // d >> s: int_s^{s+d} (u - s)^{-1/2} u^{-1/2} du = 2 asinh(sqrt(d / s))
    const double s2 = 1e-8, d2 = 1.0;
    EXPECT_NEAR(vmrf::shifted_power_integral(s2, d2, -0.5, -0.5, spec), 2.0 * std::asinh(std::sqrt(d2 / s2)), 1e-11);
}

}  // namespace
