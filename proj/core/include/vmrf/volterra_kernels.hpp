#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "vmrf/quadrature.hpp"

namespace vmrf {

// Hurst parameter of a fractional Brownian motion, validated to lie in (0, 1).
class HurstParam {
public:
    explicit HurstParam(double H);
    double value() const noexcept { return H_; }
    bool is_brownian() const noexcept { return H_ == 0.5; }

private:
    double H_;
};

// A real function on (0, T] together with its power-law exponent at 0, so that
// quadrature can absorb the singularity: f(u) ~ u^exponent_at_zero as u -> 0.
struct KernelFunction {
    std::function<double(double)> f;
    double exponent_at_zero = 0.0;

    double operator()(double u) const { return f(u); }
};

// Generalized kernel K(t,s) = a(s) * int_s^t b(u) c(u - s) du with Sonine partner h of c.
struct MishuraKernel {
    KernelFunction a;
    KernelFunction a_prime;  // derivative of a, supplied by the caller
    KernelFunction b;
    KernelFunction c;
    KernelFunction h;
    // Declared integrability exponents; 1/p + 1/q + 1/r <= 3/2 is checked on construction.
    double p = 2.0;
    double q = 2.0;
    double r = 2.0;
};

struct FBmKernel {
    HurstParam hurst;
};

class KernelSpec {
public:
    KernelSpec(FBmKernel fbm, double horizon);
    KernelSpec(MishuraKernel mishura, double horizon);

    static KernelSpec fbm(double H, double horizon = 1.0) { return KernelSpec(FBmKernel{HurstParam(H)}, horizon); }

    double horizon() const noexcept { return horizon_; }
    bool is_fbm() const noexcept { return std::holds_alternative<FBmKernel>(variant_); }
    bool is_brownian() const noexcept { return is_fbm() && hurst().is_brownian(); }
    // Throws if the spec is not an fBm kernel.
    HurstParam hurst() const;
    const MishuraKernel& mishura() const;

    // Power-law exponents of u -> K(t, u) at u -> 0 and u -> t.
    double exponent_at_origin() const;
    double exponent_at_diagonal() const;

private:
    std::variant<FBmKernel, MishuraKernel> variant_;
    double horizon_;
    double c_H_ = 0.0;  // cached normalization constant for non-Brownian fBm

    friend double kernel_K_gap(const KernelSpec&, double, double);
};

// Quadrature used internally for pointwise kernel evaluations.
QuadratureSpec default_kernel_quadrature();

// c_H for H != 1/2; throws Error(degenerate_kernel) at H = 1/2.
double normalization_constant(HurstParam H);

double covariance_R(const KernelSpec& spec, double t, double s);

// K(t, s); zero for s >= t, and 1 for s < t in the Brownian case.
double kernel_K(const KernelSpec& spec, double t, double s);

// K(s + gap, s) evaluated from the gap directly, accurate when gap << s.
double kernel_K_gap(const KernelSpec& spec, double s, double gap);

// The unnormalized inverse kernel L(t, s) (no c_H factor); 1 for s < t when H = 1/2.
double kernel_L(const KernelSpec& spec, double t, double s);
double kernel_L_gap(const KernelSpec& spec, double s, double gap);

// |int_0^{t^s} K(t,u) K(s,u) du - R(t, s)|; throws QuadFailure if the checked quadrature fails.
double isometry_residual(const KernelSpec& spec, double t, double s, const QuadratureSpec& quad);

// |int_0^t c(s) h(t - s) ds - 1|.
double sonine_residual(const KernelFunction& c, const KernelFunction& h, double t, const QuadratureSpec& quad);

// L(t,s) = h(t-s) / (a(t) b(s)) + (1/b(s)) int_s^t a'(v) h(v-s) / a(v)^2 dv.
double mishura_L(const MishuraKernel& kernel, double t, double s,
                 const QuadratureSpec& quad = default_kernel_quadrature());

// K(t,s) = a(s) int_s^t b(u) c(u - s) du.
double mishura_K(const MishuraKernel& kernel, double t, double s,
                 const QuadratureSpec& quad = default_kernel_quadrature());

// Convenience: power function u -> scale * u^exponent with its exponent recorded.
KernelFunction power_function(double scale, double exponent);

}  // namespace vmrf
