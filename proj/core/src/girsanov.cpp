#include "vmrf/girsanov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vmrf/error.hpp"
#include "vmrf/parallel.hpp"

namespace vmrf {

NovikovPartition novikov_partition(std::span<const double> M, double dt, double cap) {
    require(M.size() >= 2, "novikov_partition: need M on at least two nodes");
    require(dt > 0.0 && cap > 0.0, "novikov_partition: dt and cap must be positive");
    for (double v : M) require(v >= 0.0 && std::isfinite(v), "novikov_partition: M must be finite and nonnegative");
    const int N = static_cast<int>(M.size()) - 1;
    // Relative slack so that sums like 0.1 + 0.1 + 0.1 still fit a cap of 0.3.
    const double limit = cap * (1.0 + 1e-12);
    NovikovPartition part;
    part.indices.push_back(0);
    double acc = 0.0;
    for (int k = 0; k < N; ++k) {
        const double step = 0.5 * (M[k] + M[k + 1]) * dt;
        if (step > limit)
            fail(ErrorCode::step_exceeds_cap, "Novikov partition: step " + std::to_string(k) + " carries " +
                                                  std::to_string(step) + " > cap " + std::to_string(cap));
        if (acc + step > limit) {
            part.indices.push_back(k);
            part.segment_integrals.push_back(acc);
            acc = 0.0;
        }
        acc += step;
    }
    part.indices.push_back(N);
    part.segment_integrals.push_back(acc);
    return part;
}

std::vector<double> LogWeights::at_index(int index) const {
    const auto it = std::find(indices.begin(), indices.end(), index);
    if (it == indices.end()) fail(ErrorCode::invalid_argument, "log-weight index " + std::to_string(index) + " not recorded");
    const auto col = static_cast<Eigen::Index>(it - indices.begin());
    std::vector<double> out(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index p = 0; p < values.rows(); ++p) out[p] = values(p, col);
    return out;
}

void log_weight_trajectory(const DiscretizedKernel& kernel, std::span<const double> drift_values,
                           std::span<const double> wstar_increments, std::span<double> out) {
    const int N = kernel.steps();
    if (static_cast<int>(drift_values.size()) != N || static_cast<int>(wstar_increments.size()) != N ||
        static_cast<int>(out.size()) != N + 1)
        fail(ErrorCode::shape_mismatch, "log_weight_trajectory: expected N drift values, N increments, N+1 outputs");
    const double dt = kernel.grid.dt();
    IncrementalDriftSolver solver(kernel);
    double cumulative = 0.0, log_z = 0.0;
    out[0] = 0.0;
    for (int k = 0; k < N; ++k) {
        cumulative += drift_values[k] * dt;
        const double q = solver.push(cumulative);
        log_z += q * wstar_increments[k] - 0.5 * q * q * dt;
        out[k + 1] = log_z;
    }
}

namespace {

void check_indices(const std::vector<int>& idx, int N) {
    for (int i : idx) require(i >= 0 && i <= N, "grid index out of range");
}

// W* increments of one path by forward substitution.
void wstar_row(const DiscretizedKernel& kernel, const PathEnsemble& z, Eigen::Index p, std::vector<double>& dw) {
    const int N = kernel.steps();
    const Eigen::MatrixXd& K = kernel.matrix;
    const double z0 = z.values(p, 0);
    for (int i = 0; i < N; ++i) {
        double acc = z.values(p, i + 1) - z0;
        for (int j = 0; j < i; ++j) acc -= K(i, j) * dw[j];
        dw[i] = acc / K(i, i);
    }
}

}  // namespace

LogWeights girsanov_log_weight(const DiscretizedKernel& kernel, const DriftFunctional& drift, const PathEnsemble& z,
                               double x0, const std::vector<int>& t_indices, int workers) {
    const int N = kernel.steps();
    if (!(z.grid == kernel.grid) || z.values.cols() != N + 1)
        fail(ErrorCode::shape_mismatch, "girsanov_log_weight: ensemble grid does not match the kernel");
    if (z.kind != EnsembleKind::volterra_path) fail(ErrorCode::shape_mismatch, "girsanov_log_weight expects Volterra paths");
    check_indices(t_indices, N);
    LogWeights lw;
    lw.indices = t_indices;
    lw.values = RowMatrix::Zero(z.paths(), static_cast<Eigen::Index>(t_indices.size()));
    if (drift.is_zero()) return lw;

    // A state-free drift shares one q across all paths.
    Eigen::VectorXd shared_q;
    if (drift.is_state_free()) {
        Eigen::VectorXd B(N + 1);
        for (int k = 0; k <= N; ++k) B(k) = drift.evaluate(0.0) * kernel.grid.node(k);
        shared_q = drift_q_transform(kernel, B);
    }
    const double dt = kernel.grid.dt();
    parallel_for(static_cast<std::size_t>(z.paths()), workers, [&](std::size_t p) {
        std::vector<double> dw(N), b(N), traj(N + 1);
        wstar_row(kernel, z, static_cast<Eigen::Index>(p), dw);
        if (drift.is_state_free()) {
            double log_z = 0.0;
            traj[0] = 0.0;
            for (int k = 0; k < N; ++k) {
                log_z += shared_q(k) * dw[k] - 0.5 * shared_q(k) * shared_q(k) * dt;
                traj[k + 1] = log_z;
            }
        } else {
            for (int k = 0; k < N; ++k) b[k] = drift.evaluate(x0 + z.values(p, k) - z.values(p, 0));
            log_weight_trajectory(kernel, b, dw, traj);
        }
        for (std::size_t c = 0; c < t_indices.size(); ++c) lw.values(p, c) = traj[t_indices[c]];
    });
    return lw;
}

ImportanceEstimate importance_expectation(std::span<const double> phi, std::span<const double> log_weights) {
    if (phi.size() != log_weights.size()) fail(ErrorCode::shape_mismatch, "importance_expectation: size mismatch");
    require(phi.size() >= 2, "importance_expectation: need at least two paths");
    const std::size_t m = phi.size();
    std::vector<double> w(m), wphi(m);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = std::exp(log_weights[i]);
        wphi[i] = w[i] * phi[i];
    }
    ImportanceEstimate out;
    const McEstimate est = mean_estimate(wphi);
    out.estimate = est.estimate;
    out.stderr_ = est.stderr_;
    const McEstimate wm = mean_estimate(w);
    out.weight_mean = wm.estimate;
    const double sum_w = pairwise_sum(w);
    out.self_normalized = pairwise_sum(wphi) / sum_w;
    std::vector<double> resid(m), wsq(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = w[i] * (phi[i] - out.self_normalized);
        resid[i] = r * r;
        wsq[i] = w[i] * w[i];
    }
    out.self_normalized_stderr = std::sqrt(pairwise_sum(resid)) / sum_w;
    out.ess = sum_w * sum_w / pairwise_sum(wsq);
    out.low_ess = out.ess < kLowEssThreshold;
    return out;
}

std::vector<WeightMeanRow> weight_mean_check(const LogWeights& weights) {
    std::vector<WeightMeanRow> rows;
    for (std::size_t c = 0; c < weights.indices.size(); ++c) {
        std::vector<double> w(static_cast<std::size_t>(weights.paths()));
        for (Eigen::Index p = 0; p < weights.values.rows(); ++p) w[p] = std::exp(weights.values(p, c));
        const McEstimate est = mean_estimate(w);
        rows.push_back({weights.indices[c], est.estimate, est.stderr_, est.within(1.0, 3.0)});
    }
    return rows;
}

PathEnsemble euler_with_drift(const DiscretizedKernel& kernel, const DriftFunctional& drift, const PathEnsemble& z,
                              double x0, int workers) {
    const int N = kernel.steps();
    if (!(z.grid == kernel.grid) || z.values.cols() != N + 1)
        fail(ErrorCode::shape_mismatch, "euler_with_drift: ensemble grid does not match the kernel");
    if (drift.uses_neighbors()) fail(ErrorCode::invalid_argument, "euler_with_drift: neighbour drifts need a graph");
    PathEnsemble out;
    out.grid = z.grid;
    out.kind = EnsembleKind::state_path;
    out.seed = z.seed;
    out.values = RowMatrix::Zero(z.paths(), N + 1);
    const double dt = kernel.grid.dt();
    parallel_for(static_cast<std::size_t>(z.paths()), workers, [&](std::size_t p) {
        double cumulative = 0.0;
        double x = x0;
        out.values(p, 0) = x0;
        for (int k = 0; k < N; ++k) {
            cumulative += drift.evaluate(x) * dt;
            x = x0 + cumulative + z.values(p, k + 1) - z.values(p, 0);
            out.values(p, k + 1) = x;
        }
    });
    return out;
}

}  // namespace vmrf
