#include "vmrf/volterra_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmrf/error.hpp"
#include "vmrf/special_functions.hpp"

namespace vmrf {

HurstParam::HurstParam(double H) : H_(H) {
    require(H > 0.0 && H < 1.0, "Hurst parameter must lie in (0, 1), got " + std::to_string(H));
}

KernelSpec::KernelSpec(FBmKernel fbm, double horizon) : variant_(fbm), horizon_(horizon) {
    require(horizon > 0.0 && std::isfinite(horizon), "KernelSpec: horizon must be positive");
    if (!fbm.hurst.is_brownian()) c_H_ = normalization_constant(fbm.hurst);
}

KernelSpec::KernelSpec(MishuraKernel mishura, double horizon) : variant_(std::move(mishura)), horizon_(horizon) {
    require(horizon > 0.0 && std::isfinite(horizon), "KernelSpec: horizon must be positive");
    const auto& m = std::get<MishuraKernel>(variant_);
    require(m.a.f && m.a_prime.f && m.b.f && m.c.f && m.h.f, "KernelSpec: Mishura kernel needs a, a', b, c and h");
    require(m.p > 0.0 && m.q > 0.0 && m.r > 0.0, "KernelSpec: integrability exponents must be positive");
    require(1.0 / m.p + 1.0 / m.q + 1.0 / m.r <= 1.5 + 1e-12,
            "KernelSpec: declared exponents violate 1/p + 1/q + 1/r <= 3/2");
}

HurstParam KernelSpec::hurst() const {
    if (!is_fbm()) fail(ErrorCode::invalid_argument, "KernelSpec: not an fBm kernel");
    return std::get<FBmKernel>(variant_).hurst;
}

const MishuraKernel& KernelSpec::mishura() const {
    if (is_fbm()) fail(ErrorCode::invalid_argument, "KernelSpec: not a Mishura kernel");
    return std::get<MishuraKernel>(variant_);
}

double KernelSpec::exponent_at_origin() const {
    if (is_fbm()) return -std::abs(hurst().value() - 0.5);
    return mishura().a.exponent_at_zero;
}

double KernelSpec::exponent_at_diagonal() const {
    if (is_fbm()) return hurst().value() - 0.5;
    return mishura().c.exponent_at_zero + 1.0;
}

QuadratureSpec default_kernel_quadrature() {
    QuadratureSpec q;
    q.panels = 16;
    q.abs_tol = 1e-10;
    return q;
}

double normalization_constant(HurstParam hurst) {
    const double H = hurst.value();
    if (hurst.is_brownian()) fail(ErrorCode::degenerate_kernel, "c_H is singular at H = 1/2; use the Brownian kernel");
    if (H > 0.5) return std::sqrt(H * (2.0 * H - 1.0) / beta_function(2.0 - 2.0 * H, H - 0.5));
    return std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * beta_function(1.0 - 2.0 * H, H + 0.5)));
}

namespace {

void check_time(const KernelSpec& spec, double t) {
    require(t <= spec.horizon() * (1.0 + 1e-12), "time argument exceeds the kernel horizon");
}

double fbm_K_gap(double H, double cH, double s, double gap) {
    const QuadratureSpec quad = default_kernel_quadrature();
    if (H > 0.5) return cH * std::pow(s, 0.5 - H) * shifted_power_integral(s, gap, H - 0.5, H - 1.5, quad);
    const double t = s + gap;
    const double head = std::pow(t * gap / s, H - 0.5);
    const double tail = (H - 0.5) * std::pow(s, 0.5 - H) * shifted_power_integral(s, gap, H - 1.5, H - 0.5, quad);
    return cH * (head - tail);
}

double fbm_L_gap(double H, double s, double gap) {
    const QuadratureSpec quad = default_kernel_quadrature();
    if (H < 0.5) return std::pow(s, 0.5 - H) * shifted_power_integral(s, gap, H - 0.5, -H - 0.5, quad);
    const double t = s + gap;
    const double head = std::pow(s * gap / t, 0.5 - H);
    const double tail = (H - 0.5) * std::pow(s, 0.5 - H) * shifted_power_integral(s, gap, H - 1.5, 0.5 - H, quad);
    return head - tail;
}

double mishura_K_gap(const MishuraKernel& k, double s, double gap, const QuadratureSpec& quad) {
    const double t = s + gap;
    const double integral = integrate_algebraic(
        OffsetFunction([&](double u, double from_s, double) { return k.b(u) * k.c(from_s); }), s, t,
        k.c.exponent_at_zero, 0.0, quad);
    return k.a(s) * integral;
}

double mishura_L_gap(const MishuraKernel& k, double s, double gap, const QuadratureSpec& quad) {
    const double t = s + gap;
    const double at = k.a(t);
    const double bs = k.b(s);
    if (at == 0.0 || bs == 0.0) fail(ErrorCode::kernel_degenerate, "mishura_L: a(t) or b(s) vanishes");
    const double integral = integrate_algebraic(
        OffsetFunction([&](double v, double from_s, double) {
            const double av = k.a(v);
            return k.a_prime(v) * k.h(from_s) / (av * av);
        }),
        s, t, k.h.exponent_at_zero, 0.0, quad);
    return k.h(gap) / (at * bs) + integral / bs;
}

}  // namespace

double covariance_R(const KernelSpec& spec, double t, double s) {
    require(t >= 0.0 && s >= 0.0, "covariance_R: times must be nonnegative");
    check_time(spec, t);
    check_time(spec, s);
    if (spec.is_fbm()) {
        const double twoH = 2.0 * spec.hurst().value();
        if (spec.is_brownian()) return std::min(t, s);
        return 0.5 * (std::pow(t, twoH) + std::pow(s, twoH) - std::pow(std::abs(t - s), twoH));
    }
    const double lo = std::min(t, s), hi = std::max(t, s);
    if (lo == 0.0) return 0.0;
    QuadratureSpec quad;
    quad.panels = 32;
    const double upper = (t == s) ? 2.0 * spec.exponent_at_diagonal() : spec.exponent_at_diagonal();
    return integrate_algebraic(OffsetFunction([&](double, double u, double to_lo) {
                                   return kernel_K_gap(spec, u, hi - lo + to_lo) * kernel_K_gap(spec, u, to_lo);
                               }),
                               0.0, lo, 2.0 * spec.exponent_at_origin(), upper, quad);
}

double kernel_K_gap(const KernelSpec& spec, double s, double gap) {
    if (!(gap > 0.0)) return 0.0;
    if (!(s > 0.0)) fail(ErrorCode::boundary_singularity, "kernel evaluation requires s > 0");
    check_time(spec, s + gap);
    if (spec.is_fbm()) {
        if (spec.is_brownian()) return 1.0;
        return fbm_K_gap(spec.hurst().value(), spec.c_H_, s, gap);
    }
    return mishura_K_gap(spec.mishura(), s, gap, default_kernel_quadrature());
}

double kernel_K(const KernelSpec& spec, double t, double s) {
    if (s >= t) return 0.0;
    return kernel_K_gap(spec, s, t - s);
}

double kernel_L_gap(const KernelSpec& spec, double s, double gap) {
    if (!(gap > 0.0)) return 0.0;
    if (!(s > 0.0)) fail(ErrorCode::boundary_singularity, "kernel evaluation requires s > 0");
    check_time(spec, s + gap);
    if (spec.is_fbm()) {
        if (spec.is_brownian()) return 1.0;
        return fbm_L_gap(spec.hurst().value(), s, gap);
    }
    return mishura_L_gap(spec.mishura(), s, gap, default_kernel_quadrature());
}

double kernel_L(const KernelSpec& spec, double t, double s) {
    if (s >= t) return 0.0;
    return kernel_L_gap(spec, s, t - s);
}

double isometry_residual(const KernelSpec& spec, double t, double s, const QuadratureSpec& quad) {
    require(t > 0.0 && s > 0.0, "isometry_residual: times must be positive");
    quad.validate();
    check_time(spec, t);
    check_time(spec, s);
    if (spec.is_brownian()) return 0.0;
    const double lo = std::min(t, s), hi = std::max(t, s);
    const double upper = (t == s) ? 2.0 * spec.exponent_at_diagonal() : spec.exponent_at_diagonal();
    const double integral = integrate_algebraic_checked(
        OffsetFunction([&](double, double u, double to_lo) {
            return kernel_K_gap(spec, u, hi - lo + to_lo) * kernel_K_gap(spec, u, to_lo);
        }),
        0.0, lo, 2.0 * spec.exponent_at_origin(), upper, quad);
    return std::abs(integral - covariance_R(spec, t, s));
}

double sonine_residual(const KernelFunction& c, const KernelFunction& h, double t, const QuadratureSpec& quad) {
    require(t > 0.0, "sonine_residual: t must be positive");
    quad.validate();
    const double integral =
        integrate_algebraic_checked(OffsetFunction([&](double, double u, double to_t) { return c(u) * h(to_t); }),
                                    0.0, t, c.exponent_at_zero, h.exponent_at_zero, quad);
    return std::abs(integral - 1.0);
}

double mishura_L(const MishuraKernel& kernel, double t, double s, const QuadratureSpec& quad) {
    if (s >= t) return 0.0;
    if (!(s > 0.0)) fail(ErrorCode::boundary_singularity, "mishura_L requires s > 0");
    return mishura_L_gap(kernel, s, t - s, quad);
}

double mishura_K(const MishuraKernel& kernel, double t, double s, const QuadratureSpec& quad) {
    if (s >= t) return 0.0;
    if (!(s > 0.0)) fail(ErrorCode::boundary_singularity, "mishura_K requires s > 0");
    return mishura_K_gap(kernel, s, t - s, quad);
}

KernelFunction power_function(double scale, double exponent) {
    return KernelFunction{[scale, exponent](double u) { return scale * std::pow(u, exponent); }, exponent};
}

}  // namespace vmrf
