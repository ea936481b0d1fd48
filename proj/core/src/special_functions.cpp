#include "vmrf/special_functions.hpp"

#include <cmath>

#include "vmrf/error.hpp"

namespace vmrf {

double log_gamma(double x) {
    require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive and finite");
    return std::lgamma(x);
}

double beta_function(double a, double b) {
    require(a > 0.0 && b > 0.0, "beta_function: arguments must be positive");
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

}  // namespace vmrf
