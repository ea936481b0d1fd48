#pragma once

#include <string>
#include <string_view>

namespace vmrf {

enum class DriftFamily { constant, linear, bounded_tanh, neighbor_linear };

// Progressive drift b(t_i, X[0..i]) from one of four parametric families. Every
// family reads only the current state of the vertex (and, for neighbor_linear, the
// current mean of its neighbours), so evaluation at step i never looks ahead.
//   constant:        theta0
//   linear:          theta0 + theta1 x
//   bounded_tanh:    theta0 tanh(x / scale)
//   neighbor_linear: theta0 + theta1 x + theta2 mean(x_neighbours)
struct DriftFunctional {
    DriftFamily family = DriftFamily::constant;
    double theta0 = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double scale = 1.0;

    static DriftFunctional zero() { return {}; }
    static DriftFunctional constant(double theta) { return {DriftFamily::constant, theta}; }
    static DriftFunctional linear(double theta0, double theta1) { return {DriftFamily::linear, theta0, theta1}; }
    static DriftFunctional bounded_tanh(double theta, double scale);
    static DriftFunctional neighbor_linear(double theta0, double theta1, double theta2) {
        return {DriftFamily::neighbor_linear, theta0, theta1, theta2};
    }

    double evaluate(double x, double neighbor_mean = 0.0) const;

    // M in |b(t, x)| <= M (1 + |x|_inf), with the sup over the vertex and its neighbours.
    double growth_bound() const;

    bool is_zero() const;
    bool is_state_free() const { return family == DriftFamily::constant || is_zero(); }
    bool uses_neighbors() const { return family == DriftFamily::neighbor_linear && theta2 != 0.0; }

    // Round-trips through parse_drift.
    std::string to_string() const;
};

// Parses "const:a", "linear:a:b", "tanh:a:scale", "neighbor:a:b:c" or "zero".
DriftFunctional parse_drift(std::string_view text);

}  // namespace vmrf
