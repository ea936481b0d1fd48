#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vmrf/rng.hpp"
#include "vmrf/volterra_kernels.hpp"

namespace vmrf {

// Uniform grid t_i = i T / N, i = 0..N.
class TimeGrid {
public:
    TimeGrid(double horizon, int steps);

    double horizon() const noexcept { return T_; }
    int steps() const noexcept { return N_; }
    double dt() const noexcept { return T_ / N_; }
    double node(int i) const noexcept { return T_ * static_cast<double>(i) / N_; }

    bool operator==(const TimeGrid& other) const noexcept { return T_ == other.T_ && N_ == other.N_; }

private:
    double T_;
    int N_;
};

inline constexpr int kMaxGridSteps = 2048;

struct DiscretizationOptions {
    // Cells within this many steps of the diagonal, and the first two columns, are
    // integrated with endpoint-singularity absorption; the rest use a short
    // Gauss-Legendre rule (far_points = 1 is the plain midpoint rule).
    int near_band = 4;
    int far_points = 3;
    QuadratureSpec near_quad{16, 1e-10, 10};
};

// Lower-triangular N x N matrix of cell averages: entry (i, j) is the mean of
// u -> K(t_{i+1}, u) over [t_j, t_{j+1}], so Z_{t_{i+1}} ~ sum_j entry(i, j) dW_j.
struct DiscretizedKernel {
    TimeGrid grid{1.0, 2};
    double hurst = 0.5;  // NaN for non-fBm kernels
    Eigen::MatrixXd matrix;

    int steps() const { return grid.steps(); }
};

DiscretizedKernel discretize_kernel(const KernelSpec& spec, const TimeGrid& grid,
                                    const DiscretizationOptions& options = {});

enum class EnsembleKind : std::uint32_t {
    bm_increments = 0,
    volterra_path = 1,
    wstar_increments = 2,
    drift_q = 3,
    state_path = 4,
};

std::string ensemble_kind_name(EnsembleKind kind);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// m paths on a grid, stored as an m x (N+1) row-major array. Column 0 holds the
// initial value (0 for noise); for increment kinds column k >= 1 holds the
// increment over [t_{k-1}, t_k], for path kinds the value at t_k.
struct PathEnsemble {
    TimeGrid grid{1.0, 2};
    EnsembleKind kind = EnsembleKind::bm_increments;
    std::uint64_t seed = 0;
    RowMatrix values;

    std::int64_t paths() const { return values.rows(); }
    void check_finite() const;
};

// i.i.d. N(0, T/N) increments; path p uses stream (seed, tag, {p, stream}).
PathEnsemble sample_bm(const TimeGrid& grid, std::int64_t m, std::uint64_t seed, int workers = 1,
                       StreamTag tag = StreamTag::brownian, std::uint64_t stream = 0);

// Z_{t_i} = (K dW)_i per path.
PathEnsemble volterra_paths(const DiscretizedKernel& kernel, const PathEnsemble& bm, int workers = 1);

// Exact-covariance Gaussian paths from the Cholesky factor of [R(t_i, t_j)].
PathEnsemble cholesky_oracle_paths(const KernelSpec& spec, const TimeGrid& grid, std::int64_t m,
                                   std::uint64_t seed, int workers = 1);

// Solves K dW* = Z per path (grid-level fundamental transform).
PathEnsemble fundamental_transform(const DiscretizedKernel& kernel, const PathEnsemble& z, int workers = 1);

// Solves K (q dt) = B for a cumulative drift B (length N+1, B_0 = 0); q has length N
// with q_j the value on cell [t_j, t_{j+1}].
Eigen::VectorXd drift_q_transform(const DiscretizedKernel& kernel, const Eigen::VectorXd& cumulative_drift);

// K (q dt), the cumulative drift reproduced from q (length N+1, leading 0).
Eigen::VectorXd reconstruct_cumulative_drift(const DiscretizedKernel& kernel, const Eigen::VectorXd& q);

// sum_{j < upto} q_j^2 dt, i.e. the squared RKHS norm of the drift up to node t_upto.
double rkhs_norm_sq(const Eigen::VectorXd& q, double dt, int upto);

// Covariance of (K dW) at the nodes t_1..t_N, i.e. dt * K K^T.
Eigen::MatrixXd discretized_covariance(const DiscretizedKernel& kernel);

// [R(t_i, t_j)] for i, j = 1..N.
Eigen::MatrixXd grid_covariance(const KernelSpec& spec, const TimeGrid& grid);

// Empirical covariance of the cumulative sums of an increment ensemble at two nodes,
// compared with the Brownian value t_i ^ t_j.
struct CovarianceProbe {
    int i = 0;
    int j = 0;
    double target = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    bool within(double k = 3.0) const { return std::abs(estimate - target) < k * stderr_; }
};

// All pairs i <= j of the given nodes (each in 1..N).
std::vector<CovarianceProbe> brownian_covariance_probes(const PathEnsemble& increments, const std::vector<int>& nodes);

// Online forward substitution for K (q dt) = B when B arrives one node at a time.
class IncrementalDriftSolver {
public:
    explicit IncrementalDriftSolver(const DiscretizedKernel& kernel);

    void reset() { k_ = 0; }
    // Supplies B_{k+1} and returns q_k.
    double push(double cumulative_next);
    int index() const noexcept { return k_; }
    const Eigen::VectorXd& q() const noexcept { return q_; }

private:
    const DiscretizedKernel* kernel_;
    Eigen::VectorXd q_;
    int k_ = 0;
};

// Binary layout: "GVPE", u32 version, u32 kind, f64 horizon, u64 steps, u64 paths,
// u64 seed, then paths * (steps+1) little-endian doubles in row-major order.
void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path);
PathEnsemble read_ensemble_binary(const std::string& path);

// CSV with header "path,t0,...,tN" and one row per path.
void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path);

}  // namespace vmrf
