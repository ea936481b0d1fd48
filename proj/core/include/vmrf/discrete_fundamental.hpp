#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vmrf/statistics.hpp"
#include "vmrf/volterra_kernels.hpp"

namespace vmrf {

// Covariance of n discrete fBm increments on a grid of spacing `step`:
// matrix(i, j) = step^{2H} A(|i - j|). The default step is 1/n.
struct IncrementCovariance {
    double hurst = 0.5;
    int n = 0;
    double step = 1.0;
    Eigen::MatrixXd matrix;
};

// R_n^{-1} built by successive bordering, with the Schur complements lambda_k of
// every extension step (lambdas.back() is the most recent margin).
struct InverseState {
    Eigen::MatrixXd inv;
    std::vector<double> lambdas;

    int size() const { return static_cast<int>(inv.rows()); }
    double lnd_margin() const { return lambdas.empty() ? 0.0 : lambdas.back(); }
};

// w = 1^T R_n^{-1} at the covariance scale (`scaled`) and at unit spacing
// (`unscaled` = 1^T A^{-1}); scaled = unscaled * step^{-2H}.
struct FundamentalWeights {
    double hurst = 0.5;
    int n = 0;
    double step = 1.0;
    Eigen::VectorXd scaled;
    Eigen::VectorXd unscaled;
};

inline constexpr double kLocalDeterminismTol = 1e-12;

// A(k) = 1/2 (|k-1|^{2H} + |k+1|^{2H} - 2|k|^{2H}).
double increment_autocovariance(HurstParam H, std::int64_t k);

IncrementCovariance build_covariance(HurstParam H, int n);
IncrementCovariance build_covariance(HurstParam H, int n, double step);

// Inverse of the 1x1 leading block; lambda_1 = r11.
InverseState initial_inverse(double r11, double tol = kLocalDeterminismTol);

// Extends R_n^{-1} to R_{n+1}^{-1} given the new column r = R_{1:n, n+1} and corner R_{n+1,n+1}.
// Throws LocalDeterminism if lambda_n <= tol.
InverseState schur_extend_inverse(const InverseState& state, const Eigen::VectorXd& border, double corner,
                                  double tol = kLocalDeterminismTol);

// Runs the bordering recursion over all leading blocks of a symmetric matrix.
InverseState recursive_inverse(const Eigen::MatrixXd& matrix, double tol = kLocalDeterminismTol);

FundamentalWeights fundamental_weights(HurstParam H, int n);
FundamentalWeights fundamental_weights(HurstParam H, int n, double step);

// A(0) - sum_{k=1}^{n-1} |A(k)|.
double gershgorin_margin(HurstParam H, int n);

// Monte Carlo estimate of E[M_n (M_{n+1} - M_n)] from m_paths samples of n+1
// increments at spacing 1/(n+1); M_k uses the leading k x k block.
McEstimate martingale_orthogonality_stat(HurstParam H, int n, std::int64_t m_paths, std::uint64_t seed,
                                         int workers = 1);

}  // namespace vmrf
