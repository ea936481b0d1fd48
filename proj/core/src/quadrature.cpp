#include "vmrf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vmrf/error.hpp"

namespace vmrf {

namespace {

using GaussRule = QuadratureRule;

GaussRule make_gauss_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        // Newton iteration on P_order starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule(int order) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_gauss_rule(order)).first;
    return it->second;
}

// Gauss-Jacobi rule for the weight (1 + x)^b on [-1, 1] via Golub-Welsch.
GaussRule make_gauss_jacobi_rule(int order, double b) {
    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(order - 1);
    for (int n = 0; n < order; ++n) {
        const double two_n_ab = 2.0 * n + b;
        diag(n) = (n == 0) ? b / (b + 2.0) : (b * b) / (two_n_ab * (two_n_ab + 2.0));
        if (n >= 1) {
            const double num = 4.0 * n * n * (n + b) * (n + b);
            const double den = two_n_ab * two_n_ab * (two_n_ab + 1.0) * (two_n_ab - 1.0);
            sub(n - 1) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

const GaussRule& gauss_jacobi_rule(double b) {
    constexpr int order = 20;
    thread_local std::map<double, GaussRule> cache;
    auto it = cache.find(b);
    if (it == cache.end()) {
        if (cache.size() > 64) cache.clear();
        it = cache.emplace(b, make_gauss_jacobi_rule(order, b)).first;
    }
    return it->second;
}

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double h = b - a;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(a + h * rule.nodes[i]);
    return sum * h;
}

// Ratio between consecutive geometric panels: aggressive enough that the innermost
// panel is negligible, but never below 0.2 so each panel stays well resolved.
double grading_ratio(int panels) { return std::max(0.2, std::pow(1e-16, 1.0 / panels)); }

// Integral of g over w in [0, 1]: uniform panels on [1/2, 1] and panels graded
// geometrically toward w = 0 below. The uniform half matters because the power map
// pulls singularities of the far end's factor (just beyond w = 1) close to the interval.
template <class G>
double graded_unit_integral(const G& g, int panels, const GaussRule& rule) {
    const int uniform = std::max(1, panels / 2);
    const int graded = std::max(1, panels - uniform);
    double sum = 0.0;
    const double step = 0.5 / uniform;
    for (int k = 0; k < uniform; ++k) sum += gauss_panel(g, 0.5 + k * step, 0.5 + (k + 1) * step, rule);
    const double r = grading_ratio(graded);
    double hi = 0.5;
    for (int k = 0; k < graded; ++k) {
        const double lo = (k + 1 == graded) ? 0.0 : hi * r;
        sum += gauss_panel(g, lo, hi, rule);
        hi = lo;
    }
    return sum;
}

// Integral of f over [lo, hi] with f ~ (x - lo)^alpha (at_lo) or (hi - x)^alpha (!at_lo)
// near the chosen end; the opposite end is treated as smooth.
double singular_end(const OffsetFunction& f, double lo, double hi, bool at_lo, double alpha, int panels,
                    const GaussRule& rule) {
    const double width = hi - lo;
    if (alpha == 0.0) {
        const double step = width / panels;
        auto g = [&](double x) { return f(x, x - lo, hi - x); };
        double sum = 0.0;
        for (int k = 0; k < panels; ++k) sum += gauss_panel(g, lo + k * step, lo + (k + 1) * step, rule);
        return sum;
    }
    const double gamma = 1.0 / (alpha + 1.0);
    const double scale = width * gamma;
    auto g = [&](double w) {
        const double wg = std::pow(w, gamma);
        const double near = width * wg;
        const double value = at_lo ? f(lo + near, near, width - near) : f(hi - near, width - near, near);
        return value * scale * wg / w;
    };
    return graded_unit_integral(g, panels, rule);
}

}  // namespace

const QuadratureRule& gauss_legendre_unit(int order) {
    require(order >= 1 && order <= 64, "gauss_legendre_unit: order must lie in [1, 64]");
    return gauss_rule(order);
}

void QuadratureSpec::validate() const {
    require(panels >= 8, "QuadratureSpec: panels must be >= 8");
    require(abs_tol > 0.0, "QuadratureSpec: abs_tol must be > 0");
    require(order >= 2 && order <= 64, "QuadratureSpec: Gauss-Legendre order must lie in [2, 64]");
}

double integrate_algebraic(const OffsetFunction& f, double lo, double hi, double lower_exp, double upper_exp,
                           const QuadratureSpec& spec) {
    spec.validate();
    require(lower_exp > -1.0 && upper_exp > -1.0, "integrate_algebraic: endpoint exponents must exceed -1");
    if (!(hi > lo)) return 0.0;
    const GaussRule& rule = gauss_rule(spec.order);
    const bool sing_lo = lower_exp != 0.0;
    const bool sing_hi = upper_exp != 0.0;
    if (sing_lo && sing_hi) {
        const double half_width = 0.5 * (hi - lo);
        const double mid = lo + half_width;
        const int half = std::max(4, spec.panels / 2);
        // Re-express offsets relative to the full interval for each half.
        OffsetFunction left = [&](double x, double a, double b) { return f(x, a, b + half_width); };
        OffsetFunction right = [&](double x, double a, double b) { return f(x, a + half_width, b); };
        return singular_end(left, lo, mid, true, lower_exp, half, rule) +
               singular_end(right, mid, hi, false, upper_exp, half, rule);
    }
    if (sing_hi) return singular_end(f, lo, hi, false, upper_exp, spec.panels, rule);
    return singular_end(f, lo, hi, true, lower_exp, spec.panels, rule);
}

double integrate_algebraic(const ScalarFunction& f, double lo, double hi, double lower_exp, double upper_exp,
                           const QuadratureSpec& spec) {
    // A node within one ulp of an endpoint can round onto it; keep it strictly inside
    // so that a singular f is never evaluated at the singularity itself.
    auto inside = [&](double x, double from_lo, double from_hi) {
        if (x <= lo && from_lo > 0.0) x = std::nextafter(lo, hi);
        if (x >= hi && from_hi > 0.0) x = std::nextafter(hi, lo);
        return f(x);
    };
    return integrate_algebraic(OffsetFunction(inside), lo, hi, lower_exp, upper_exp, spec);
}

double integrate_algebraic_checked(const OffsetFunction& f, double lo, double hi, double lower_exp,
                                   double upper_exp, const QuadratureSpec& spec) {
    const double coarse = integrate_algebraic(f, lo, hi, lower_exp, upper_exp, spec);
    QuadratureSpec fine = spec;
    fine.panels = 2 * spec.panels;
    const double refined = integrate_algebraic(f, lo, hi, lower_exp, upper_exp, fine);
    const double diff = std::abs(refined - coarse);
    if (!(diff <= spec.abs_tol)) {
        std::ostringstream msg;
        msg << "quadrature did not converge: |I(2P) - I(P)| = " << std::scientific << std::setprecision(3) << diff
            << " exceeds abs_tol " << spec.abs_tol;
        throw QuadFailure(msg.str(), diff);
    }
    return refined;
}

double integrate_algebraic_checked(const ScalarFunction& f, double lo, double hi, double lower_exp,
                                   double upper_exp, const QuadratureSpec& spec) {
    return integrate_algebraic_checked(OffsetFunction([&](double x, double, double) { return f(x); }), lo, hi,
                                       lower_exp, upper_exp, spec);
}

double integrate_smooth(const ScalarFunction& f, double lo, double hi, int panels, int order) {
    require(panels >= 1, "integrate_smooth: panels must be >= 1");
    const GaussRule& rule = gauss_rule(order);
    const double step = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) sum += gauss_panel(f, lo + k * step, lo + (k + 1) * step, rule);
    return sum;
}

double shifted_power_integral(double s, double d, double alpha, double beta, const QuadratureSpec& spec) {
    require(s > 0.0 && d >= 0.0, "shifted_power_integral: need s > 0 and d >= 0");
    require(beta > -1.0, "shifted_power_integral: beta must exceed -1");
    if (d == 0.0) return 0.0;
    const GaussRule& rule = gauss_rule(spec.order);

    // Near piece: v in [0, e], e = min(s, d). Gauss-Jacobi with weight v^beta leaves
    // (s + v)^alpha, which is analytic on a neighbourhood of [0, e] because e <= s.
    const double e = std::min(s, d);
    const GaussRule& jacobi = gauss_jacobi_rule(beta);
    double near = 0.0;
    for (std::size_t i = 0; i < jacobi.nodes.size(); ++i)
        near += jacobi.weights[i] * std::pow(s + 0.5 * e * (1.0 + jacobi.nodes[i]), alpha);
    double total = std::pow(0.5 * e, beta + 1.0) * near;

    if (d > s) {
        // Far piece: v in [s, d] with v = exp(y); the integrand is analytic in y with
        // its nearest singularity a distance pi off the real axis.
        const double y0 = std::log(s), y1 = std::log(d);
        const int panels = std::max(1, static_cast<int>(std::ceil((y1 - y0) / 2.0)));
        auto far = [&](double y) {
            const double v = std::exp(y);
            return std::pow(v, beta + 1.0) * std::pow(s + v, alpha);
        };
        const double step = (y1 - y0) / panels;
        for (int k = 0; k < panels; ++k) total += gauss_panel(far, y0 + k * step, y0 + (k + 1) * step, rule);
    }
    return total;
}

}  // namespace vmrf
