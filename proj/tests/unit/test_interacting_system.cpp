#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "vmrf/error.hpp"
#include "vmrf/interacting_system.hpp"
#include "vmrf/mrf_analysis.hpp"
#include "vmrf/statistics.hpp"

namespace {

using vmrf::DriftFunctional;
using vmrf::InteractingSystem;
using vmrf::KernelCache;
using vmrf::TimeGrid;
using vmrf::VertexSet;

InteractingSystem make_system(vmrf::Graph g, const DriftFunctional& drift, double H, int N = 8, double x0 = 0.0) {
    InteractingSystem sys;
    sys.graph = std::move(g);
    sys.drift = vmrf::uniform_drift(drift);
    sys.hurst = H;
    sys.grid = TimeGrid(1.0, N);
    sys.mu0 = {x0, 0.0};
    return sys;
}

std::vector<double> column(const vmrf::PathEnsemble& e, int k) {
    std::vector<double> out(static_cast<std::size_t>(e.paths()));
    for (Eigen::Index p = 0; p < e.paths(); ++p) out[p] = e.values(p, k);
    return out;
}

TEST(System, DriftlessStateIsNoisePlusInitialValue) {
    auto sys = make_system(vmrf::path_graph(3), DriftFunctional::linear(0.3, -1.0), 0.3, 8, 0.5);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 50, 7, 1, false);
    const auto drifted = vmrf::simulate_system_euler(sys, cache, 50, 7, 1, true);
    EXPECT_FALSE(free.drifted);
    EXPECT_TRUE(drifted.drifted);
    for (auto v : free.vertices) {
        EXPECT_EQ(free.state(v).values.col(0).minCoeff(), 0.5);
        // Same noise: the difference is the accumulated drift, which is O(dt) at the first step.
        const double x1_free = free.state(v).values(0, 1), x1_drift = drifted.state(v).values(0, 1);
        EXPECT_NEAR(x1_drift - x1_free, (0.3 - 0.5) * sys.grid.dt(), 1e-12);
    }
    // Vertices carry distinct noise.
    EXPECT_NE(free.state(0).values(0, 8), free.state(1).values(0, 8));
}

TEST(System, ChunkingAndWorkersDoNotChangeSamples) {
    auto sys = make_system(vmrf::path_graph(4), DriftFunctional::neighbor_linear(0.1, -0.5, 0.4), 0.7);
    KernelCache cache(sys.grid);
    const auto whole = vmrf::simulate_system_euler(sys, cache, 40, 3, 1);
    const auto threaded = vmrf::simulate_system_euler(sys, cache, 40, 3, 3);
    const auto tail = vmrf::simulate_system_euler(sys, cache, 15, 3, 2, true, 25);
    for (std::size_t i = 0; i < whole.vertices.size(); ++i) {
        EXPECT_TRUE(whole.states[i].values == threaded.states[i].values);
        EXPECT_TRUE(whole.states[i].values.bottomRows(15) == tail.states[i].values);
    }
}

TEST(System, OrnsteinUhlenbeckMean) {
    vmrf::Graph g;
    g.add_vertex(0);
    auto sys = make_system(g, DriftFunctional::linear(0.0, -1.0), 0.5, 32, 1.0);
    KernelCache cache(sys.grid);
    const auto e = vmrf::simulate_system_euler(sys, cache, 20000, 12);
    const auto est = vmrf::mean_estimate(column(e.state(0), 32));
    const double euler_mean = std::pow(1.0 - sys.grid.dt(), 32);
    EXPECT_TRUE(est.within(euler_mean, 3.0)) << est.estimate;
    EXPECT_LT(std::abs(euler_mean - std::exp(-1.0)), 0.01);
}

TEST(System, NeighbourCouplingCreatesCorrelation) {
    auto sys = make_system(vmrf::path_graph(2), DriftFunctional::neighbor_linear(0.0, -0.5, 1.5), 0.3, 16);
    KernelCache cache(sys.grid);
    const auto e = vmrf::simulate_system_euler(sys, cache, 20000, 5);
    const auto a = column(e.state(0), 16), b = column(e.state(1), 16);
    EXPECT_GT(std::abs(vmrf::sample_covariance(a, b)), 3.0 * vmrf::covariance_stderr(a, b));
}

TEST(System, TruncatedDriftVanishesOnShell) {
    const auto t = vmrf::truncate(vmrf::zline_generator(), 0, 5);
    const auto spec = vmrf::truncated_drift(vmrf::uniform_drift(DriftFunctional::constant(0.7)), t);
    EXPECT_EQ(spec.truncation_level, 5);
    for (auto v : t.shell) EXPECT_TRUE(spec.at(v).is_zero()) << v;
    for (auto v : t.inner) EXPECT_EQ(spec.at(v).theta0, 0.7) << v;
}

TEST(LogWeights, CliqueBookkeeping) {
    auto sys = make_system(vmrf::path_graph(5), DriftFunctional::zero(), 0.3);
    sys.drift.drifts[1] = DriftFunctional::neighbor_linear(0.2, -0.3, 0.5);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 30, 2, 1, false);
    const auto lw = vmrf::system_log_weights(sys, cache, free, 8);
    const auto& cliques = lw.cliques;
    for (Eigen::Index c = 0; c < lw.clique_factors.cols(); ++c) {
        const bool support = cliques[c] == VertexSet{0, 1, 2};
        if (!support) EXPECT_EQ(lw.clique_factors.col(c).cwiseAbs().maxCoeff(), 0.0) << vmrf::format_vertex_set(cliques[c]);
        else EXPECT_GT(lw.clique_factors.col(c).cwiseAbs().maxCoeff(), 0.0);
    }
    for (Eigen::Index p = 0; p < lw.clique_factors.rows(); ++p)
        EXPECT_NEAR(lw.clique_factors.row(p).sum(), lw.total[p], 1e-12);
    EXPECT_THROW(vmrf::system_log_weights(sys, cache, vmrf::simulate_system_euler(sys, cache, 5, 2), 8), vmrf::Error);
}

TEST(LogWeights, ZeroDriftGivesZeroFactors) {
    auto sys = make_system(vmrf::cycle_graph(4), DriftFunctional::zero(), 0.7);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 10, 2, 1, false);
    const auto lw = vmrf::system_log_weights(sys, cache, free, 8);
    EXPECT_EQ(lw.clique_factors.cwiseAbs().maxCoeff(), 0.0);
}

TEST(CITest, DeterministicAndBounded) {
    auto sys = make_system(vmrf::path_graph(5), DriftFunctional::zero(), 0.3);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 400, 9, 1, false);
    vmrf::CITestOptions opt;
    opt.perms = 99;
    opt.seed = 4;
    const auto a = vmrf::conditional_independence_test(free, {}, {0}, {4}, {1, 2}, opt);
    opt.workers = 3;
    const auto b = vmrf::conditional_independence_test(free, {}, {0}, {4}, {1, 2}, opt);
    EXPECT_EQ(a.p_value, b.p_value);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_GT(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_EQ(a.separator_features, 16);
}

TEST(CITest, DetectsDependenceWithoutSeparator) {
    // With an empty separator two strongly coupled neighbours must be flagged.
    auto sys = make_system(vmrf::path_graph(2), DriftFunctional::neighbor_linear(0.0, -0.5, 2.0), 0.5);
    KernelCache cache(sys.grid);
    const auto e = vmrf::simulate_system_euler(sys, cache, 2000, 1);
    vmrf::CITestOptions opt;
    opt.perms = 199;
    const auto r = vmrf::conditional_independence_test(e, {}, {0}, {1}, {}, opt);
    EXPECT_LE(r.p_value, 0.01);
}

TEST(CITest, RankDeficientSeparator) {
    auto sys = make_system(vmrf::path_graph(5), DriftFunctional::zero(), 0.3);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 10, 9, 1, false);
    try {
        vmrf::conditional_independence_test(free, {}, {0}, {4}, {1, 2}, {});
        FAIL();
    } catch (const vmrf::Error& e) {
        EXPECT_EQ(e.code(), vmrf::ErrorCode::separator_degenerate);
    }
    EXPECT_THROW(vmrf::conditional_independence_test(free, {}, {0}, {1}, {1, 2}, {}), vmrf::Error);
}

TEST(Truncation, DriftlessEstimatesAgreeAcrossLevels) {
    const auto psi = [](const vmrf::SystemEnsemble& e, std::int64_t p) {
        return std::clamp(e.state(0).values(p, e.grid.steps()), -10.0, 10.0);
    };
    const auto sweep = vmrf::truncation_convergence(vmrf::zline_generator(), vmrf::uniform_drift(DriftFunctional::zero()),
                                                    0.3, {0}, psi, {4, 5, 6}, TimeGrid(1.0, 8), 200, 3, {});
    ASSERT_EQ(sweep.rows.size(), 3u);
    // Shared noise on vertex 0 makes the driftless estimates identical.
    EXPECT_EQ(sweep.rows[0].estimate.estimate, sweep.rows[1].estimate.estimate);
    EXPECT_EQ(sweep.rows[2].diff_from_previous, 0.0);
    EXPECT_THROW(vmrf::truncation_convergence(vmrf::zline_generator(), vmrf::uniform_drift(DriftFunctional::zero()), 0.3,
                                              {2}, psi, {4}, TimeGrid(1.0, 8), 10, 3, {}),
                 vmrf::Error);
}

TEST(Entropy, ZeroDriftHasZeroEntropy) {
    auto sys = make_system(vmrf::path_graph(3), DriftFunctional::zero(), 0.3);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 100, 1, 1, false);
    const auto lw = vmrf::system_log_weights(sys, cache, free, 8);
    const auto r = vmrf::entropy_estimate(sys, cache, free, lw, {1});
    EXPECT_EQ(r.estimate.estimate, 0.0);
    EXPECT_EQ(r.reverse_estimate.estimate, 0.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.relevant, (VertexSet{0, 1, 2}));
}

TEST(Entropy, BrownianSingleVertexMatchesClosedForm) {
    vmrf::Graph g;
    g.add_vertex(0);
    const double theta = 0.8;
    auto sys = make_system(g, DriftFunctional::constant(theta), 0.5, 16);
    KernelCache cache(sys.grid);
    const auto free = vmrf::simulate_system_euler(sys, cache, 40000, 8, 1, false);
    const auto lw = vmrf::system_log_weights(sys, cache, free, 16);
    const auto r = vmrf::entropy_estimate(sys, cache, free, lw, {0});
    EXPECT_TRUE(r.estimate.within(0.5 * theta * theta, 3.0)) << r.estimate.estimate << " +- " << r.estimate.stderr_;
    // For a constant shift both directions equal theta^2 T / 2.
    EXPECT_TRUE(r.reverse_estimate.within(0.5 * theta * theta, 3.0))
        << r.reverse_estimate.estimate << " +- " << r.reverse_estimate.stderr_;
    EXPECT_NEAR(r.unit_energy, 1.0, 1e-12);
    EXPECT_TRUE(r.pass);
}

}  // namespace
