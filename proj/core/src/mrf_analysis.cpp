#include "vmrf/mrf_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/QR>

#include "vmrf/error.hpp"
#include "vmrf/parallel.hpp"
#include "vmrf/rng.hpp"

namespace vmrf {

std::vector<int> default_summary_nodes(int N) {
    std::vector<int> nodes;
    for (int k = 1; k <= 4; ++k) nodes.push_back(std::max(1, (k * N) / 4));
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

namespace {

Eigen::MatrixXd summary_features(const SystemEnsemble& ens, const VertexSet& set, const std::vector<int>& nodes) {
    const std::int64_t m = ens.paths();
    Eigen::MatrixXd F(m, static_cast<Eigen::Index>(set.size() * nodes.size()));
    Eigen::Index col = 0;
    for (Vertex v : set) {
        const RowMatrix& X = ens.state(v).values;
        for (int k : nodes) {
            for (std::int64_t p = 0; p < m; ++p) F(p, col) = X(p, k);
            ++col;
        }
    }
    return F;
}

// Rescales each column to unit norm; zero columns stay zero.
void normalize_columns(Eigen::MatrixXd& M) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        const double norm = M.col(c).norm();
        if (norm > 0.0) M.col(c) /= norm;
    }
}

double max_abs_cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a.transpose() * b).cwiseAbs().maxCoeff();
}

}  // namespace

CITestReport conditional_independence_test(const SystemEnsemble& ensemble, std::span<const double> log_weights,
                                           const VertexSet& A, const VertexSet& B, const VertexSet& S,
                                           const CITestOptions& options) {
    require(!A.empty() && !B.empty(), "CI test: A and B must be nonempty");
    require(options.perms >= 1, "CI test: need at least one permutation");
    for (Vertex v : B) require(!A.count(v) && !S.count(v), "CI test: B must be disjoint from A and S");
    for (Vertex v : A) require(!S.count(v), "CI test: A and S must be disjoint");
    const std::int64_t m = ensemble.paths();
    if (!log_weights.empty() && static_cast<std::int64_t>(log_weights.size()) != m)
        fail(ErrorCode::shape_mismatch, "CI test: one log-weight per path required");
    const int N = ensemble.grid.steps();
    std::vector<int> nodes = options.summary_nodes.empty() ? default_summary_nodes(N) : options.summary_nodes;
    for (int k : nodes) require(k >= 0 && k <= N, "CI test: summary node out of range");

    std::vector<int> sep_nodes;
    if (options.full_path_separator)
        for (int k = 1; k <= N; ++k) sep_nodes.push_back(k);
    else
        sep_nodes = nodes;

    // Separator design: intercept plus every non-constant separator feature.
    const Eigen::MatrixXd raw_s = summary_features(ensemble, S, sep_nodes);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < raw_s.cols(); ++c)
        if (raw_s.col(c).maxCoeff() > raw_s.col(c).minCoeff()) keep.push_back(c);
    Eigen::MatrixXd design(m, static_cast<Eigen::Index>(keep.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t i = 0; i < keep.size(); ++i) design.col(static_cast<Eigen::Index>(i) + 1) = raw_s.col(keep[i]);

    Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
    if (!log_weights.empty()) {
        const double top = *std::max_element(log_weights.begin(), log_weights.end());
        for (std::int64_t p = 0; p < m; ++p) w(p) = std::exp(log_weights[p] - top);
        w *= static_cast<double>(m) / w.sum();
    }
    const Eigen::VectorXd sw = w.cwiseSqrt();

    const Eigen::MatrixXd D = sw.asDiagonal() * design;
    Eigen::MatrixXd YA = sw.asDiagonal() * summary_features(ensemble, A, nodes);
    Eigen::MatrixXd YB = sw.asDiagonal() * summary_features(ensemble, B, nodes);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    if (qr.rank() < D.cols())
        fail(ErrorCode::separator_degenerate, "CI test: separator design is rank deficient (rank " +
                                                  std::to_string(qr.rank()) + " of " + std::to_string(D.cols()) + ")");
    Eigen::MatrixXd RA = YA - D * qr.solve(YA);
    Eigen::MatrixXd RB = YB - D * qr.solve(YB);
    normalize_columns(RA);
    normalize_columns(RB);

    CITestReport report;
    report.A = A;
    report.B = B;
    report.S = S;
    report.paths = m;
    report.perms = options.perms;
    report.seed = options.seed;
    report.separator_features = static_cast<int>(keep.size());
    report.ess = w.sum() * w.sum() / w.squaredNorm();
    report.statistic = max_abs_cross(RA, RB);

    std::vector<unsigned char> exceed(static_cast<std::size_t>(options.perms), 0);
    const double threshold = report.statistic * (1.0 - 1e-12);
    parallel_for(exceed.size(), options.workers, [&](std::size_t r) {
        RandomStream rng(options.seed, StreamTag::permutation, {static_cast<std::uint64_t>(r)});
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        Eigen::MatrixXd permuted(RB.rows(), RB.cols());
        for (std::int64_t i = 0; i < m; ++i) permuted.row(i) = RB.row(perm[static_cast<std::size_t>(i)]);
        exceed[r] = max_abs_cross(RA, permuted) >= threshold ? 1 : 0;
    });
    const auto count = std::count(exceed.begin(), exceed.end(), 1);
    report.p_value = (1.0 + static_cast<double>(count)) / (options.perms + 1.0);
    return report;
}

TruncationSweep truncation_convergence(const GraphGenerator& graph, const VertexDriftSpec& drift, double hurst,
                                       const VertexSet& A, const PathFunctional& psi, const std::vector<int>& n_list,
                                       const TimeGrid& grid, std::int64_t m, std::uint64_t seed, const InitialLaw& mu0,
                                       int workers) {
    require(!n_list.empty(), "truncation_convergence: empty n list");
    require(m >= 2, "truncation_convergence: need at least two paths");
    for (int n : n_list) require(n >= 4, "truncation_convergence: every n must be >= 4");
    const int n_min = *std::min_element(n_list.begin(), n_list.end());
    const auto dist = graph.ball(graph.root(), n_min - 3);
    for (Vertex a : A)
        require(dist.count(a) != 0, "truncation_convergence: A must lie inside V_{min n - 3}");

    KernelCache kernels(grid);
    constexpr std::int64_t chunk = 4096;
    TruncationSweep sweep;
    std::vector<double> previous;
    for (int n : n_list) {
        const TruncatedGraph tg = truncate(graph, graph.root(), n);
        InteractingSystem system;
        system.graph = tg.graph;
        system.drift = truncated_drift(drift, tg);
        system.hurst = hurst;
        system.grid = grid;
        system.mu0 = mu0;
        std::vector<double> values(static_cast<std::size_t>(m));
        for (std::int64_t start = 0; start < m; start += chunk) {
            const std::int64_t count = std::min(chunk, m - start);
            const SystemEnsemble ens = simulate_system_euler(system, kernels, count, seed, workers, true, start);
            for (std::int64_t p = 0; p < count; ++p) values[static_cast<std::size_t>(start + p)] = psi(ens, p);
        }
        TruncationRow row;
        row.n = n;
        row.estimate = mean_estimate(values);
        if (!previous.empty()) {
            std::vector<double> diff(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) diff[i] = values[i] - previous[i];
            const McEstimate d = mean_estimate(diff);
            row.diff_from_previous = d.estimate;
            row.diff_stderr = d.stderr_;
        }
        sweep.rows.push_back(row);
        previous = std::move(values);
    }
    if (sweep.rows.size() >= 3) {
        const TruncationRow& first = sweep.rows[1];
        const TruncationRow& last = sweep.rows.back();
        const double combined = std::sqrt(first.diff_stderr * first.diff_stderr + last.diff_stderr * last.diff_stderr);
        sweep.shrinks = std::abs(last.diff_from_previous) < std::abs(first.diff_from_previous) + 3.0 * combined;
    }
    return sweep;
}

EntropyReport entropy_estimate(const InteractingSystem& system, KernelCache& kernels, const SystemEnsemble& driftless,
                               const SystemLogWeights& weights, const VertexSet& A) {
    require(!A.empty(), "entropy_estimate: A must be nonempty");
    if (driftless.drifted) fail(ErrorCode::invalid_argument, "entropy_estimate needs a driftless ensemble");
    const int t = weights.t_index;
    EntropyReport rep;
    rep.A = A;
    for (Vertex u : system.graph.vertices()) {
        bool meets = A.count(u) != 0;
        for (Vertex v : system.graph.neighbors(u)) meets = meets || A.count(v) != 0;
        if (meets) rep.relevant.insert(u);
    }
    const std::vector<double> log_z = weights.restricted_total(rep.relevant);
    std::vector<double> zlogz(log_z.size()), neg_log(log_z.size());
    for (std::size_t p = 0; p < log_z.size(); ++p) {
        zlogz[p] = std::exp(log_z[p]) * log_z[p];
        neg_log[p] = -log_z[p];
    }
    rep.estimate = mean_estimate(zlogz);
    rep.reverse_estimate = mean_estimate(neg_log);

    const std::vector<Vertex> verts = system.graph.vertices();
    const TimeGrid& grid = system.grid;
    for (Vertex v : verts) {
        const DiscretizedKernel& K = kernels.get(system.hurst_of(v));
        Eigen::VectorXd B(grid.steps() + 1);
        for (int k = 0; k <= grid.steps(); ++k) B(k) = grid.node(k);
        rep.unit_energy = std::max(rep.unit_energy, rkhs_norm_sq(drift_q_transform(K, B), grid.dt(), t));
    }
    rep.max_growth = system.drift.max_growth_bound(verts);
    for (Vertex v : verts) {
        const RowMatrix& X = driftless.state(v).values;
        std::vector<double> weighted(static_cast<std::size_t>(X.rows()));
        for (Eigen::Index p = 0; p < X.rows(); ++p) {
            double sup = 0.0;
            for (int k = 0; k <= t; ++k) sup = std::max(sup, X(p, k) * X(p, k));
            weighted[p] = std::exp(weights.total[p]) * sup;
        }
        rep.sup_second_moment = std::max(rep.sup_second_moment, mean(weighted));
    }
    rep.max_degree = system.graph.max_degree();
    rep.c_t = (1.0 + static_cast<double>(rep.max_degree)) * rep.max_growth * rep.max_growth * rep.unit_energy *
              (1.0 + 2.0 * rep.sup_second_moment);
    rep.bound = rep.c_t * static_cast<double>(A.size());
    rep.pass = rep.estimate.estimate <= rep.bound;
    return rep;
}

}  // namespace vmrf
