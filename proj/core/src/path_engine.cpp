#include "vmrf/path_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vmrf/error.hpp"
#include "vmrf/parallel.hpp"
#include "vmrf/statistics.hpp"

namespace vmrf {

TimeGrid::TimeGrid(double horizon, int steps) : T_(horizon), N_(steps) {
    require(horizon > 0.0 && std::isfinite(horizon), "TimeGrid: horizon must be positive");
    require(steps >= 1, "TimeGrid: need at least one step");
}

std::string ensemble_kind_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::bm_increments: return "bm-increments";
        case EnsembleKind::volterra_path: return "volterra-path";
        case EnsembleKind::wstar_increments: return "wstar-increments";
        case EnsembleKind::drift_q: return "drift-q";
        case EnsembleKind::state_path: return "state-path";
    }
    return "unknown";
}

void PathEnsemble::check_finite() const {
    if (!values.allFinite()) fail(ErrorCode::invalid_argument, "PathEnsemble contains non-finite values");
    if (values.cols() != grid.steps() + 1) fail(ErrorCode::shape_mismatch, "PathEnsemble width must be N + 1");
}

namespace {

double cell_average(const KernelSpec& spec, int i, int j, double dt, const DiscretizationOptions& opt) {
    const double cell_lo = j * dt;
    // Distance from the right end of the cell to the evaluation node t_{i+1}.
    const double tail = static_cast<double>(i - j) * dt;
    const bool near = (i - j) < opt.near_band || j < 2;
    if (near) {
        const double lower = (j == 0) ? spec.exponent_at_origin() : 0.0;
        const double upper = (j == i) ? spec.exponent_at_diagonal() : 0.0;
        const double integral = integrate_algebraic(
            OffsetFunction([&](double, double from_lo, double from_hi) {
                return kernel_K_gap(spec, cell_lo + from_lo, tail + from_hi);
            }),
            0.0, dt, lower, upper, opt.near_quad);
        return integral / dt;
    }
    const QuadratureRule& rule = gauss_legendre_unit(opt.far_points);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = rule.nodes[k];
        sum += rule.weights[k] * kernel_K_gap(spec, cell_lo + x * dt, tail + (1.0 - x) * dt);
    }
    return sum;
}

void check_kernel_shape(const DiscretizedKernel& kernel, const PathEnsemble& ens) {
    if (!(ens.grid == kernel.grid) || ens.values.cols() != kernel.steps() + 1)
        fail(ErrorCode::shape_mismatch, "ensemble grid does not match the discretized kernel");
}

}  // namespace

DiscretizedKernel discretize_kernel(const KernelSpec& spec, const TimeGrid& grid, const DiscretizationOptions& options) {
    const int N = grid.steps();
    require(N <= kMaxGridSteps, "discretize_kernel: N exceeds the dense budget of 2048 steps");
    require(grid.horizon() <= spec.horizon() * (1.0 + 1e-12), "discretize_kernel: grid extends past the kernel horizon");
    require(options.near_band >= 1 && options.far_points >= 1, "discretize_kernel: invalid options");
    DiscretizedKernel out;
    out.grid = grid;
    out.hurst = spec.is_fbm() ? spec.hurst().value() : std::numeric_limits<double>::quiet_NaN();
    out.matrix = Eigen::MatrixXd::Zero(N, N);
    if (spec.is_brownian()) {
        out.matrix.triangularView<Eigen::Lower>().setOnes();
        return out;
    }
    const double dt = grid.dt();
    try {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j <= i; ++j) out.matrix(i, j) = cell_average(spec, i, j, dt, options);
    } catch (const Error& e) {
        fail(ErrorCode::kernel_discretization_failure, std::string("kernel discretization failed: ") + e.what());
    }
    if (!out.matrix.allFinite())
        fail(ErrorCode::kernel_discretization_failure, "kernel discretization produced non-finite entries");
    for (int i = 0; i < N; ++i)
        if (!(std::abs(out.matrix(i, i)) > 0.0))
            fail(ErrorCode::kernel_discretization_failure, "discretized kernel has a zero diagonal entry");
    return out;
}

PathEnsemble sample_bm(const TimeGrid& grid, std::int64_t m, std::uint64_t seed, int workers, StreamTag tag,
                       std::uint64_t stream) {
    require(m >= 1, "sample_bm: need at least one path");
    PathEnsemble ens;
    ens.grid = grid;
    ens.kind = EnsembleKind::bm_increments;
    ens.seed = seed;
    ens.values = RowMatrix::Zero(m, grid.steps() + 1);
    const double sd = std::sqrt(grid.dt());
    parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t p) {
        RandomStream rng(seed, tag, {static_cast<std::uint64_t>(p), stream});
        for (int k = 1; k <= grid.steps(); ++k) ens.values(p, k) = sd * rng.normal();
    });
    return ens;
}

PathEnsemble volterra_paths(const DiscretizedKernel& kernel, const PathEnsemble& bm, int workers) {
    check_kernel_shape(kernel, bm);
    if (bm.kind != EnsembleKind::bm_increments && bm.kind != EnsembleKind::wstar_increments)
        fail(ErrorCode::shape_mismatch, "volterra_paths expects an increment ensemble");
    const int N = kernel.steps();
    const Eigen::MatrixXd& K = kernel.matrix;
    PathEnsemble out;
    out.grid = bm.grid;
    out.kind = EnsembleKind::volterra_path;
    out.seed = bm.seed;
    out.values = RowMatrix::Zero(bm.paths(), N + 1);
    parallel_for(static_cast<std::size_t>(bm.paths()), workers, [&](std::size_t p) {
        const double* dw = bm.values.row(p).data() + 1;
        for (int i = 0; i < N; ++i) {
            double z = 0.0;
            for (int j = 0; j <= i; ++j) z += K(i, j) * dw[j];
            out.values(p, i + 1) = z;
        }
    });
    return out;
}

Eigen::MatrixXd grid_covariance(const KernelSpec& spec, const TimeGrid& grid) {
    const int N = grid.steps();
    Eigen::MatrixXd R(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j) R(i, j) = R(j, i) = covariance_R(spec, grid.node(i + 1), grid.node(j + 1));
    return R;
}

PathEnsemble cholesky_oracle_paths(const KernelSpec& spec, const TimeGrid& grid, std::int64_t m, std::uint64_t seed,
                                   int workers) {
    require(m >= 1, "cholesky_oracle_paths: need at least one path");
    const int N = grid.steps();
    Eigen::LLT<Eigen::MatrixXd> llt(grid_covariance(spec, grid));
    if (llt.info() != Eigen::Success) fail(ErrorCode::cholesky_failure, "grid covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    PathEnsemble out;
    out.grid = grid;
    out.kind = EnsembleKind::volterra_path;
    out.seed = seed;
    out.values = RowMatrix::Zero(m, N + 1);
    parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t p) {
        RandomStream rng(seed, StreamTag::cholesky_oracle, {static_cast<std::uint64_t>(p)});
        std::vector<double> xi(N);
        for (double& x : xi) x = rng.normal();
        for (int i = 0; i < N; ++i) {
            double z = 0.0;
            for (int j = 0; j <= i; ++j) z += L(i, j) * xi[j];
            out.values(p, i + 1) = z;
        }
    });
    return out;
}

PathEnsemble fundamental_transform(const DiscretizedKernel& kernel, const PathEnsemble& z, int workers) {
    check_kernel_shape(kernel, z);
    if (z.kind != EnsembleKind::volterra_path) fail(ErrorCode::shape_mismatch, "fundamental_transform expects Volterra paths");
    const int N = kernel.steps();
    const Eigen::MatrixXd& K = kernel.matrix;
    for (int i = 0; i < N; ++i)
        if (!(std::abs(K(i, i)) > 0.0) || !std::isfinite(K(i, i)))
            fail(ErrorCode::transform_singular, "discretized kernel is singular");
    PathEnsemble out;
    out.grid = z.grid;
    out.kind = EnsembleKind::wstar_increments;
    out.seed = z.seed;
    out.values = RowMatrix::Zero(z.paths(), N + 1);
    parallel_for(static_cast<std::size_t>(z.paths()), workers, [&](std::size_t p) {
        // Column 0 of a Volterra ensemble is the initial value; the noise is Z - Z_0.
        const double z0 = z.values(p, 0);
        double* dw = out.values.row(p).data() + 1;
        for (int i = 0; i < N; ++i) {
            double acc = z.values(p, i + 1) - z0;
            for (int j = 0; j < i; ++j) acc -= K(i, j) * dw[j];
            dw[i] = acc / K(i, i);
        }
    });
    return out;
}

Eigen::VectorXd drift_q_transform(const DiscretizedKernel& kernel, const Eigen::VectorXd& cumulative_drift) {
    const int N = kernel.steps();
    if (cumulative_drift.size() != N + 1) fail(ErrorCode::shape_mismatch, "drift_q_transform: B must have N + 1 entries");
    require(cumulative_drift(0) == 0.0, "drift_q_transform: B_0 must be 0");
    IncrementalDriftSolver solver(kernel);
    for (int k = 1; k <= N; ++k) solver.push(cumulative_drift(k));
    return solver.q();
}

Eigen::VectorXd reconstruct_cumulative_drift(const DiscretizedKernel& kernel, const Eigen::VectorXd& q) {
    const int N = kernel.steps();
    if (q.size() != N) fail(ErrorCode::shape_mismatch, "reconstruct_cumulative_drift: q must have N entries");
    Eigen::VectorXd B = Eigen::VectorXd::Zero(N + 1);
    const double dt = kernel.grid.dt();
    for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) acc += kernel.matrix(i, j) * q(j);
        B(i + 1) = acc * dt;
    }
    return B;
}

double rkhs_norm_sq(const Eigen::VectorXd& q, double dt, int upto) {
    require(upto >= 0 && upto <= q.size(), "rkhs_norm_sq: index out of range");
    double s = 0.0;
    for (int j = 0; j < upto; ++j) s += q(j) * q(j);
    return s * dt;
}

Eigen::MatrixXd discretized_covariance(const DiscretizedKernel& kernel) {
    const Eigen::MatrixXd& K = kernel.matrix;
    return kernel.grid.dt() * K * K.transpose();
}

IncrementalDriftSolver::IncrementalDriftSolver(const DiscretizedKernel& kernel)
    : kernel_(&kernel), q_(Eigen::VectorXd::Zero(kernel.steps())) {
    for (int i = 0; i < kernel.steps(); ++i)
        if (!(std::abs(kernel.matrix(i, i)) > 0.0)) fail(ErrorCode::transform_singular, "discretized kernel is singular");
}

double IncrementalDriftSolver::push(double cumulative_next) {
    if (k_ >= kernel_->steps()) fail(ErrorCode::shape_mismatch, "IncrementalDriftSolver: grid exhausted");
    const Eigen::MatrixXd& K = kernel_->matrix;
    const double dt = kernel_->grid.dt();
    double acc = cumulative_next / dt;
    for (int j = 0; j < k_; ++j) acc -= K(k_, j) * q_(j);
    q_(k_) = acc / K(k_, k_);
    return q_(k_++);
}

std::vector<CovarianceProbe> brownian_covariance_probes(const PathEnsemble& increments, const std::vector<int>& nodes) {
    if (increments.kind != EnsembleKind::bm_increments && increments.kind != EnsembleKind::wstar_increments)
        fail(ErrorCode::shape_mismatch, "brownian_covariance_probes expects an increment ensemble");
    const int N = increments.grid.steps();
    for (int k : nodes) require(k >= 1 && k <= N, "brownian_covariance_probes: node out of range");
    const auto m = static_cast<std::size_t>(increments.paths());
    std::vector<std::vector<double>> cum(nodes.size(), std::vector<double>(m));
    for (std::size_t p = 0; p < m; ++p) {
        double acc = 0.0;
        int done = 0;
        for (int k = 1; k <= N; ++k) {
            acc += increments.values(static_cast<Eigen::Index>(p), k);
            for (std::size_t a = 0; a < nodes.size(); ++a)
                if (nodes[a] == k) {
                    cum[a][p] = acc;
                    ++done;
                }
            if (done == static_cast<int>(nodes.size())) break;
        }
    }
    std::vector<CovarianceProbe> out;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a; b < nodes.size(); ++b) {
            CovarianceProbe probe;
            probe.i = nodes[a];
            probe.j = nodes[b];
            probe.target = increments.grid.node(std::min(nodes[a], nodes[b]));
            probe.estimate = sample_covariance(cum[a], cum[b]);
            probe.stderr_ = covariance_stderr(cum[a], cum[b]);
            out.push_back(probe);
        }
    return out;
}

}  // namespace vmrf
