#pragma once

#include <functional>
#include <vector>

namespace vmrf {

// Quadrature controls for the singularity-absorbing Gauss-Legendre scheme.
struct QuadratureSpec {
    int panels = 64;
    double abs_tol = 1e-10;
    int order = 10;  // Gauss-Legendre points per panel

    void validate() const;
};

// Nodes and weights of an n-point rule on [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const QuadratureRule& gauss_legendre_unit(int order);

using ScalarFunction = std::function<double(double)>;

// Integrand that also receives its distances to both interval ends, computed without
// cancellation. Singular integrands should use these instead of x - lo or hi - x.
using OffsetFunction = std::function<double(double x, double from_lo, double from_hi)>;

// Integrates f over [lo, hi] where f may behave like (x - lo)^lower_exp near lo and
// (hi - x)^upper_exp near hi (exponents > -1; pass 0 for a smooth endpoint).
// Each singular end is absorbed by x = end +- h * w^{1/(exp+1)} and the resulting
// smooth integrand is integrated with geometrically graded Gauss-Legendre panels.
double integrate_algebraic(const ScalarFunction& f, double lo, double hi, double lower_exp,
                           double upper_exp, const QuadratureSpec& spec);

double integrate_algebraic(const OffsetFunction& f, double lo, double hi, double lower_exp,
                           double upper_exp, const QuadratureSpec& spec);

// Same as integrate_algebraic, but compares P and 2P panels and throws QuadFailure
// carrying the achieved difference if it exceeds spec.abs_tol.
double integrate_algebraic_checked(const ScalarFunction& f, double lo, double hi, double lower_exp,
                                   double upper_exp, const QuadratureSpec& spec);
double integrate_algebraic_checked(const OffsetFunction& f, double lo, double hi, double lower_exp,
                                   double upper_exp, const QuadratureSpec& spec);

// Plain composite Gauss-Legendre on uniform panels (smooth integrands).
double integrate_smooth(const ScalarFunction& f, double lo, double hi, int panels, int order = 10);

// Integral of (u - s)^beta * u^alpha over u in [s, s + d], s > 0, d > 0, beta > -1.
// Stable for d << s and for s << d; the width d is passed directly so that no
// cancellation occurs when the upper limit is close to s.
double shifted_power_integral(double s, double d, double alpha, double beta, const QuadratureSpec& spec);

}  // namespace vmrf
