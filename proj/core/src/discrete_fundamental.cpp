#include "vmrf/discrete_fundamental.hpp"

#include <cmath>
#include <string>

#include "vmrf/error.hpp"
#include "vmrf/parallel.hpp"
#include "vmrf/rng.hpp"

namespace vmrf {

double increment_autocovariance(HurstParam hurst, std::int64_t k) {
    const double twoH = 2.0 * hurst.value();
    const double kd = std::abs(static_cast<double>(k));
    return 0.5 * (std::pow(std::abs(kd - 1.0), twoH) + std::pow(kd + 1.0, twoH) - 2.0 * std::pow(kd, twoH));
}

IncrementCovariance build_covariance(HurstParam H, int n) {
    require(n >= 1, "build_covariance: n must be >= 1");
    return build_covariance(H, n, 1.0 / n);
}

IncrementCovariance build_covariance(HurstParam H, int n, double step) {
    require(n >= 1, "build_covariance: n must be >= 1");
    require(step > 0.0, "build_covariance: step must be positive");
    IncrementCovariance cov{H.value(), n, step, Eigen::MatrixXd(n, n)};
    const double scale = std::pow(step, 2.0 * H.value());
    std::vector<double> lags(n);
    for (int k = 0; k < n; ++k) lags[k] = scale * increment_autocovariance(H, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cov.matrix(i, j) = lags[std::abs(i - j)];
    return cov;
}

InverseState initial_inverse(double r11, double tol) {
    if (!(r11 > tol)) throw LocalDeterminism("local determinism at step 1: lambda = " + std::to_string(r11), 1, r11);
    InverseState state;
    state.inv = Eigen::MatrixXd::Constant(1, 1, 1.0 / r11);
    state.lambdas.push_back(r11);
    return state;
}

InverseState schur_extend_inverse(const InverseState& state, const Eigen::VectorXd& border, double corner, double tol) {
    const int n = state.size();
    if (border.size() != n) fail(ErrorCode::shape_mismatch, "schur_extend_inverse: border length must equal n");
    const Eigen::VectorXd v = state.inv * border;
    const double lambda = corner - border.dot(v);
    if (!(lambda > tol)) {
        throw LocalDeterminism("local determinism at step " + std::to_string(n + 1) +
                                   ": lambda = " + std::to_string(lambda),
                               static_cast<std::size_t>(n + 1), lambda);
    }
    InverseState next;
    next.inv.resize(n + 1, n + 1);
    next.inv.topLeftCorner(n, n) = state.inv + v * v.transpose() / lambda;
    next.inv.block(0, n, n, 1) = -v / lambda;
    next.inv.block(n, 0, 1, n) = -v.transpose() / lambda;
    next.inv(n, n) = 1.0 / lambda;
    next.lambdas = state.lambdas;
    next.lambdas.push_back(lambda);
    return next;
}

InverseState recursive_inverse(const Eigen::MatrixXd& matrix, double tol) {
    require(matrix.rows() == matrix.cols() && matrix.rows() >= 1, "recursive_inverse: need a nonempty square matrix");
    InverseState state = initial_inverse(matrix(0, 0), tol);
    for (Eigen::Index k = 1; k < matrix.rows(); ++k)
        state = schur_extend_inverse(state, matrix.block(0, k, k, 1), matrix(k, k), tol);
    return state;
}

FundamentalWeights fundamental_weights(HurstParam H, int n) { return fundamental_weights(H, n, 1.0 / n); }

FundamentalWeights fundamental_weights(HurstParam H, int n, double step) {
    const IncrementCovariance cov = build_covariance(H, n, step);
    const InverseState state = recursive_inverse(cov.matrix);
    FundamentalWeights w;
    w.hurst = H.value();
    w.n = n;
    w.step = step;
    w.scaled = state.inv.colwise().sum().transpose();
    w.unscaled = w.scaled * std::pow(step, 2.0 * H.value());
    return w;
}

double gershgorin_margin(HurstParam H, int n) {
    require(n >= 2, "gershgorin_margin: n must be >= 2");
    double off = 0.0;
    for (int k = 1; k < n; ++k) off += std::abs(increment_autocovariance(H, k));
    return increment_autocovariance(H, 0) - off;
}

McEstimate martingale_orthogonality_stat(HurstParam H, int n, std::int64_t m_paths, std::uint64_t seed, int workers) {
    require(n >= 1, "martingale_orthogonality_stat: n must be >= 1");
    require(m_paths >= 1000, "martingale_orthogonality_stat: need at least 1000 paths");
    const IncrementCovariance cov = build_covariance(H, n + 1);
    Eigen::LLT<Eigen::MatrixXd> llt(cov.matrix);
    if (llt.info() != Eigen::Success) fail(ErrorCode::cholesky_failure, "increment covariance is not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();
    const InverseState full = recursive_inverse(cov.matrix);
    const InverseState lead = recursive_inverse(cov.matrix.topLeftCorner(n, n));
    const Eigen::VectorXd w_next = full.inv.colwise().sum().transpose();
    const Eigen::VectorXd w_now = lead.inv.colwise().sum().transpose();

    std::vector<double> products(static_cast<std::size_t>(m_paths));
    parallel_for(products.size(), workers, [&](std::size_t p) {
        RandomStream rng(seed, StreamTag::orthogonality, {static_cast<std::uint64_t>(p)});
        Eigen::VectorXd xi(n + 1);
        for (int i = 0; i <= n; ++i) xi(i) = rng.normal();
        const Eigen::VectorXd z = chol * xi;
        const double m_now = w_now.dot(z.head(n));
        const double m_next = w_next.dot(z);
        products[p] = m_now * (m_next - m_now);
    });
    return mean_estimate(products);
}

}  // namespace vmrf
