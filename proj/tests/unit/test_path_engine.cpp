#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "vmrf/error.hpp"
#include "vmrf/path_engine.hpp"
#include "vmrf/statistics.hpp"

namespace {

using vmrf::EnsembleKind;
using vmrf::KernelSpec;
using vmrf::TimeGrid;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("vmrf_unit_" + name);
}

TEST(TimeGrid, NodesAndValidation) {
    TimeGrid g(2.0, 8);
    EXPECT_DOUBLE_EQ(g.dt(), 0.25);
    EXPECT_DOUBLE_EQ(g.node(8), 2.0);
    EXPECT_DOUBLE_EQ(g.node(3), 0.75);
    EXPECT_THROW(TimeGrid(0.0, 4), vmrf::Error);
    EXPECT_THROW(TimeGrid(1.0, 0), vmrf::Error);
}

TEST(DiscretizeKernel, BrownianIsAllOnesBelowDiagonal) {
    const auto k = vmrf::discretize_kernel(KernelSpec::fbm(0.5), TimeGrid(1.0, 6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_EQ(k.matrix(i, j), j <= i ? 1.0 : 0.0);
}

TEST(DiscretizeKernel, RejectsOversizedGrid) {
    EXPECT_THROW(vmrf::discretize_kernel(KernelSpec::fbm(0.3), TimeGrid(1.0, vmrf::kMaxGridSteps + 1)), vmrf::Error);
    EXPECT_THROW(vmrf::discretize_kernel(KernelSpec::fbm(0.3, 1.0), TimeGrid(2.0, 8)), vmrf::Error);
}

TEST(DiscretizeKernel, CovarianceCloseToExact) {
    const TimeGrid grid(1.0, 32);
    for (double H : {0.3, 0.7}) {
        const auto spec = KernelSpec::fbm(H);
        const auto k = vmrf::discretize_kernel(spec, grid);
        const Eigen::MatrixXd exact = vmrf::grid_covariance(spec, grid);
        const double rel = (vmrf::discretized_covariance(k) - exact).norm() / exact.norm();
        EXPECT_LT(rel, 1e-2) << H;
    }
}

TEST(SampleBm, VarianceAndDeterminism) {
    const TimeGrid grid(2.0, 4);
    const auto a = vmrf::sample_bm(grid, 20000, 3, 1);
    const auto b = vmrf::sample_bm(grid, 20000, 3, 4);
    EXPECT_EQ(a.kind, EnsembleKind::bm_increments);
    EXPECT_TRUE(a.values == b.values);
    for (int k = 1; k <= 4; ++k) {
        std::vector<double> col(a.values.rows());
        for (Eigen::Index p = 0; p < a.values.rows(); ++p) col[p] = a.values(p, k) * a.values(p, k);
        EXPECT_TRUE(vmrf::mean_estimate(col).within(0.5, 4.0));
        EXPECT_EQ(a.values(0, 0), 0.0);
    }
    const auto c = vmrf::sample_bm(grid, 10, 4, 1);
    EXPECT_NE(a.values(0, 1), c.values(0, 1));
}

TEST(FundamentalTransform, InvertsVolterraPaths) {
    const TimeGrid grid(1.0, 24);
    const auto k = vmrf::discretize_kernel(KernelSpec::fbm(0.3), grid);
    const auto bm = vmrf::sample_bm(grid, 50, 9);
    const auto z = vmrf::volterra_paths(k, bm);
    EXPECT_EQ(z.kind, EnsembleKind::volterra_path);
    const auto w = vmrf::fundamental_transform(k, z);
    EXPECT_EQ(w.kind, EnsembleKind::wstar_increments);
    EXPECT_LT((w.values - bm.values).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(vmrf::fundamental_transform(k, bm), vmrf::Error);
}

TEST(CholeskyOracle, EmpiricalCovariance) {
    const TimeGrid grid(1.0, 4);
    const auto spec = KernelSpec::fbm(0.7);
    const auto z = vmrf::cholesky_oracle_paths(spec, grid, 40000, 1);
    const Eigen::MatrixXd R = vmrf::grid_covariance(spec, grid);
    for (int i = 1; i <= 4; ++i) {
        std::vector<double> x(z.values.rows()), y(z.values.rows());
        for (Eigen::Index p = 0; p < z.values.rows(); ++p) {
            x[p] = z.values(p, i);
            y[p] = z.values(p, 4);
        }
        const double cov = vmrf::sample_covariance(x, y);
        EXPECT_LT(std::abs(cov - R(i - 1, 3)), 4.0 * vmrf::covariance_stderr(x, y));
    }
}

TEST(CovarianceProbes, BrownianIncrements) {
    const TimeGrid grid(2.0, 8);
    const auto bm = vmrf::sample_bm(grid, 20000, 17);
    const auto probes = vmrf::brownian_covariance_probes(bm, {2, 4, 8});
    ASSERT_EQ(probes.size(), 6u);
    EXPECT_EQ(probes[1].i, 2);
    EXPECT_EQ(probes[1].j, 4);
    EXPECT_DOUBLE_EQ(probes[1].target, 0.5);
    EXPECT_DOUBLE_EQ(probes[5].target, 2.0);
    for (const auto& p : probes) EXPECT_TRUE(p.within(4.0)) << p.i << "," << p.j << " " << p.estimate;
    EXPECT_THROW(vmrf::brownian_covariance_probes(bm, {9}), vmrf::Error);
}

TEST(DriftTransform, BrownianGivesTheDriftItself) {
    const TimeGrid grid(1.0, 8);
    const auto k = vmrf::discretize_kernel(KernelSpec::fbm(0.5), grid);
    Eigen::VectorXd B(9);
    for (int i = 0; i <= 8; ++i) B(i) = 0.7 * grid.node(i);
    const Eigen::VectorXd q = vmrf::drift_q_transform(k, B);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(q(j), 0.7, 1e-13);
    EXPECT_NEAR(vmrf::rkhs_norm_sq(q, grid.dt(), 8), 0.49, 1e-12);
    EXPECT_NEAR(vmrf::rkhs_norm_sq(q, grid.dt(), 4), 0.245, 1e-12);
}

TEST(DriftTransform, RoundTripAndIncrementalSolver) {
    const TimeGrid grid(1.0, 32);
    const auto k = vmrf::discretize_kernel(KernelSpec::fbm(0.3), grid);
    Eigen::VectorXd B(33);
    for (int i = 0; i <= 32; ++i) B(i) = std::sin(3.0 * grid.node(i));
    const Eigen::VectorXd q = vmrf::drift_q_transform(k, B);
    EXPECT_LT((vmrf::reconstruct_cumulative_drift(k, q) - B).cwiseAbs().maxCoeff(), 1e-12);
    vmrf::IncrementalDriftSolver solver(k);
    for (int i = 1; i <= 32; ++i) EXPECT_NEAR(solver.push(B(i)), q(i - 1), 1e-12);
    EXPECT_THROW(solver.push(0.0), vmrf::Error);
    Eigen::VectorXd bad = B;
    bad(0) = 1.0;
    EXPECT_THROW(vmrf::drift_q_transform(k, bad), vmrf::Error);
}

TEST(DriftTransform, PowerLawShapeForUnitDrift) {
    // For b = 1 and H = 0.3 the transform is C s^{0.2} with C = 1.21713822346653828.
    const TimeGrid grid(1.0, 64);
    const auto k = vmrf::discretize_kernel(KernelSpec::fbm(0.3), grid);
    Eigen::VectorXd B(65);
    for (int i = 0; i <= 64; ++i) B(i) = grid.node(i);
    const Eigen::VectorXd q = vmrf::drift_q_transform(k, B);
    const double C = 1.21713822346653828, dt = grid.dt();
    for (int j = 7; j < 64; ++j) {
        const double a = j * dt, b = a + dt;
        const double cell_mean = C * (std::pow(b, 1.2) - std::pow(a, 1.2)) / (1.2 * dt);
        EXPECT_NEAR(q(j), cell_mean, 2e-3) << j;
    }
}

TEST(EnsembleIo, BinaryRoundTrip) {
    const TimeGrid grid(1.5, 5);
    auto e = vmrf::sample_bm(grid, 7, 123);
    const auto path = temp_file("roundtrip.gvpe").string();
    vmrf::write_ensemble_binary(e, path);
    const auto back = vmrf::read_ensemble_binary(path);
    EXPECT_TRUE(back.grid == grid);
    EXPECT_EQ(back.kind, e.kind);
    EXPECT_EQ(back.seed, 123u);
    EXPECT_TRUE(back.values == e.values);
    std::filesystem::remove(path);
}

TEST(EnsembleIo, RejectsCorruptFiles) {
    const auto path = temp_file("corrupt.gvpe").string();
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE and some bytes";
    }
    try {
        vmrf::read_ensemble_binary(path);
        FAIL();
    } catch (const vmrf::Error& e) {
        EXPECT_EQ(e.code(), vmrf::ErrorCode::io_error);
    }
    std::filesystem::remove(path);
    EXPECT_THROW(vmrf::read_ensemble_binary(temp_file("missing.gvpe").string()), vmrf::Error);
}

TEST(EnsembleIo, CsvHeaderAndRows) {
    const TimeGrid grid(1.0, 3);
    const auto e = vmrf::sample_bm(grid, 2, 1);
    const auto path = temp_file("ens.csv").string();
    vmrf::write_ensemble_csv(e, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    EXPECT_EQ(header, "path,t0,t1,t2,t3");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 2);
    std::filesystem::remove(path);
}

}  // namespace
