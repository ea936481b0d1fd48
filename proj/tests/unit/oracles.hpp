#pragma once

#include <cmath>
#include <functional>

namespace vmrf_test {

// Adaptive Simpson with Richardson correction; only used on smooth integrands.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

// c_H including the (H - 1/2) factor for H > 1/2, as in the kernel representation.
inline double c_h(double H) {
    const double base = std::sqrt(2.0 * H * std::tgamma(1.5 - H) / (std::tgamma(H + 0.5) * std::tgamma(2.0 - 2.0 * H)));
    return H > 0.5 ? (H - 0.5) * base : base;
}

// K(t, s) from the substituted integrals (u - s = v^{1/p}) which are smooth in v.
inline double fbm_kernel(double H, double t, double s) {
    if (s >= t) return 0.0;
    if (H > 0.5) {
        const double a = H - 0.5;
        auto g = [&](double v) { return std::pow(s + std::pow(v, 1.0 / a), a); };
        return c_h(H) * std::pow(s, -a) / a * adaptive_simpson(g, 0.0, std::pow(t - s, a));
    }
    const double p = H + 0.5;
    auto g = [&](double v) { return std::pow(s + std::pow(v, 1.0 / p), H - 1.5); };
    const double integral = adaptive_simpson(g, 0.0, std::pow(t - s, p)) / p;
    return c_h(H) * (std::pow(t / s, H - 0.5) * std::pow(t - s, H - 0.5) - (H - 0.5) * std::pow(s, 0.5 - H) * integral);
}

// Unnormalized inverse kernel L(t, s).
inline double fbm_inverse_kernel(double H, double t, double s) {
    if (s >= t) return 0.0;
    if (H < 0.5) {
        // s^{1/2-H} int_s^t (u - s)^{-H-1/2} u^{H-1/2} du, with u - s = v^{1/(1/2-H)}
        const double p = 0.5 - H;
        auto g = [&](double v) { return std::pow(s + std::pow(v, 1.0 / p), H - 0.5); };
        return std::pow(s, p) * adaptive_simpson(g, 0.0, std::pow(t - s, p)) / p;
    }
    // (s(t-s)/t)^{1/2-H} - (H-1/2) s^{1/2-H} int_s^t (u - s)^{1/2-H} u^{H-3/2} du
    const double p = 1.5 - H;
    auto g = [&](double v) { return std::pow(s + std::pow(v, 1.0 / p), H - 1.5); };
    const double integral = adaptive_simpson(g, 0.0, std::pow(t - s, p)) / p;
    return std::pow(s * (t - s) / t, 0.5 - H) - (H - 0.5) * std::pow(s, 0.5 - H) * integral;
}

}  // namespace vmrf_test
