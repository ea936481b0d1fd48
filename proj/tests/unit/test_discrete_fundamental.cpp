#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/LU>

#include "vmrf/discrete_fundamental.hpp"
#include "vmrf/error.hpp"

namespace {

using vmrf::HurstParam;

// Straight re-implementation of the reference listing: Toeplitz matrix of
// 2|eI|^{2H} - |eI - e|^{2H} - |eI + e|^{2H} with I = 0..n-1, then ones * inverse.
Eigen::RowVectorXd listing_weights(double H, int n, double e) {
    Eigen::VectorXd F(n);
    for (int i = 0; i < n; ++i) {
        const double x = e * i;
        F(i) = 2.0 * std::pow(std::abs(x), 2 * H) - std::pow(std::abs(x - e), 2 * H) - std::pow(std::abs(x + e), 2 * H);
    }
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T(i, j) = F(std::abs(i - j));
    return Eigen::RowVectorXd::Ones(n) * T.fullPivLu().inverse();
}

TEST(IncrementCovariance, AutocovarianceValues) {
    EXPECT_DOUBLE_EQ(vmrf::increment_autocovariance(HurstParam(0.7), 0), 1.0);
    EXPECT_NEAR(vmrf::increment_autocovariance(HurstParam(0.3), 1), -0.242141716744800959, 1e-15);
    // Brownian increments are uncorrelated.
    EXPECT_NEAR(vmrf::increment_autocovariance(HurstParam(0.5), 3), 0.0, 1e-15);
    EXPECT_EQ(vmrf::increment_autocovariance(HurstParam(0.3), -2), vmrf::increment_autocovariance(HurstParam(0.3), 2));
}

TEST(IncrementCovariance, ScaledByStep) {
    const auto cov = vmrf::build_covariance(HurstParam(0.3), 6);
    EXPECT_EQ(cov.matrix.rows(), 6);
    EXPECT_NEAR(cov.step, 1.0 / 6.0, 1e-16);
    EXPECT_NEAR(cov.matrix(0, 0), std::pow(1.0 / 6.0, 0.6), 1e-15);
    EXPECT_NEAR(cov.matrix(2, 3), std::pow(1.0 / 6.0, 0.6) * -0.242141716744800959, 1e-15);
    EXPECT_TRUE(cov.matrix.isApprox(cov.matrix.transpose()));
}

TEST(RecursiveInverse, MatchesDenseLu) {
    for (double H : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (int n : {1, 2, 7, 32, 64}) {
            const auto cov = vmrf::build_covariance(HurstParam(H), n);
            const auto state = vmrf::recursive_inverse(cov.matrix);
            const Eigen::MatrixXd lu = cov.matrix.partialPivLu().inverse();
            const double rel = (state.inv - lu).norm() / lu.norm();
            EXPECT_LT(rel, 1e-9) << "H=" << H << " n=" << n;
            EXPECT_EQ(static_cast<int>(state.lambdas.size()), n);
            EXPECT_GT(state.lnd_margin(), 0.0);
        }
}

TEST(RecursiveInverse, LambdasAreSchurComplements) {
    const auto cov = vmrf::build_covariance(HurstParam(0.7), 5);
    const auto state = vmrf::recursive_inverse(cov.matrix);
    // lambda_n = det(R_n) / det(R_{n-1})
    for (int k = 2; k <= 5; ++k) {
        const double ratio = cov.matrix.topLeftCorner(k, k).determinant() / cov.matrix.topLeftCorner(k - 1, k - 1).determinant();
        EXPECT_NEAR(state.lambdas[k - 1], ratio, 1e-12 * ratio);
    }
}

TEST(RecursiveInverse, ThrowsOnLocalDeterminism) {
    Eigen::MatrixXd m(3, 3);
    m << 1, 1, 0.5, 1, 1, 0.5, 0.5, 0.5, 1;
    try {
        vmrf::recursive_inverse(m);
        FAIL();
    } catch (const vmrf::LocalDeterminism& e) {
        EXPECT_EQ(e.code(), vmrf::ErrorCode::local_determinism);
        EXPECT_EQ(e.step(), 2u);
        EXPECT_LE(e.lambda(), vmrf::kLocalDeterminismTol);
    }
}

TEST(FundamentalWeights, ListingOracle) {
    const double H = 0.3, e = 0.1;
    const int n = 5;
    const auto w = vmrf::fundamental_weights(HurstParam(H), n, e);
    const Eigen::RowVectorXd listing = listing_weights(H, n, e);
    const double frozen[] = {-3.3785223804471007, -4.1517543123299205, -4.33310518615996, -4.1517543123299205,
                             -3.3785223804471003};
    for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(listing(i), frozen[i], 1e-12);
        EXPECT_NEAR(w.scaled(i), -2.0 * listing(i), 1e-11);
    }
}

TEST(FundamentalWeights, ScaledAndUnscaledRelation) {
    const auto w = vmrf::fundamental_weights(HurstParam(0.7), 16);
    EXPECT_NEAR(w.step, 1.0 / 16.0, 1e-16);
    for (int i = 0; i < 16; ++i) EXPECT_NEAR(w.scaled(i), w.unscaled(i) * std::pow(16.0, 1.4), 1e-9 * std::abs(w.scaled(i)));
    // Symmetric Toeplitz matrix: weights are palindromic.
    for (int i = 0; i < 16; ++i) EXPECT_NEAR(w.unscaled(i), w.unscaled(15 - i), 1e-10);
}

TEST(FundamentalWeights, BrownianIsAllOnesOverStep) {
    const auto w = vmrf::fundamental_weights(HurstParam(0.5), 8);
    for (int i = 0; i < 8; ++i) {
        EXPECT_NEAR(w.unscaled(i), 1.0, 1e-14);
        EXPECT_NEAR(w.scaled(i), 8.0, 1e-12);
    }
}

TEST(Gershgorin, FrozenValues) {
    EXPECT_NEAR(vmrf::gershgorin_margin(HurstParam(0.7), 10), -0.222421073784786347, 1e-14);
    EXPECT_NEAR(vmrf::gershgorin_margin(HurstParam(0.3), 10), 0.621939443344210265, 1e-14);
}

TEST(Gershgorin, RoughIncrementsStayDiagonallyDominant) {
    for (double H : {0.1, 0.2, 0.3, 0.4, 0.49})
        for (int n : {2, 10, 100, 1000}) EXPECT_GE(vmrf::gershgorin_margin(HurstParam(H), n), 0.5) << H << " " << n;
}

TEST(Orthogonality, MonteCarloNearZero) {
    for (double H : {0.3, 0.7}) {
        const auto est = vmrf::martingale_orthogonality_stat(HurstParam(H), 4, 20000, 11);
        EXPECT_TRUE(est.within(0.0, 4.0)) << est.estimate << " +- " << est.stderr_;
        EXPECT_GT(est.stderr_, 0.0);
    }
}

TEST(Orthogonality, IndependentOfWorkerCount) {
    const auto a = vmrf::martingale_orthogonality_stat(HurstParam(0.3), 3, 5000, 5, 1);
    const auto b = vmrf::martingale_orthogonality_stat(HurstParam(0.3), 3, 5000, 5, 3);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.stderr_, b.stderr_);
}

}  // namespace
