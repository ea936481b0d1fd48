#pragma once

namespace vmrf {

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Euler Beta function B(a, b) for a, b > 0, computed through log-Gamma.
double beta_function(double a, double b);

}  // namespace vmrf
