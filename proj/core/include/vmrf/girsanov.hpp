#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vmrf/drift.hpp"
#include "vmrf/path_engine.hpp"
#include "vmrf/statistics.hpp"

namespace vmrf {

// Grid indices 0 = i_0 < i_1 < ... < i_K = N whose segments carry at most `cap`
// of the integrated bound M.
struct NovikovPartition {
    std::vector<int> indices;
    std::vector<double> segment_integrals;
};

inline constexpr double kDefaultNovikovCap = 0.25;

// Greedy left-to-right partition of the trapezoidal integral of M (sampled at the
// N+1 nodes). Throws Error(step_exceeds_cap) if one step alone exceeds the cap.
NovikovPartition novikov_partition(std::span<const double> M, double dt, double cap = kDefaultNovikovCap);

// Per-path log Z at selected grid indices: values(p, k) = log Z_{t_indices[k]} for path p.
struct LogWeights {
    std::vector<int> indices;
    RowMatrix values;

    std::int64_t paths() const { return values.rows(); }
    // Column of log Z at grid index `index`; throws if the index was not recorded.
    std::vector<double> at_index(int index) const;
};

// log Z at every node 0..N for one path, from drift values b_0..b_{N-1} (b_k is
// evaluated at t_k) and W* increments dW*_0..dW*_{N-1}:
//   log Z_{t_n} = sum_{k<n} q_k dW*_k - 1/2 sum_{k<n} q_k^2 dt,  K (q dt) = cumsum(b dt).
void log_weight_trajectory(const DiscretizedKernel& kernel, std::span<const double> drift_values,
                           std::span<const double> wstar_increments, std::span<double> out);

// Girsanov log-weights for X = x0 + Z with Z sampled under the driftless law.
LogWeights girsanov_log_weight(const DiscretizedKernel& kernel, const DriftFunctional& drift, const PathEnsemble& z,
                               double x0, const std::vector<int>& t_indices, int workers = 1);

struct ImportanceEstimate {
    double estimate = 0.0;       // mean of w * phi with unnormalized weights
    double stderr_ = 0.0;
    double self_normalized = 0.0;  // sum w phi / sum w
    double self_normalized_stderr = 0.0;
    double weight_mean = 0.0;
    double ess = 0.0;  // m / (1 + CV^2(w))
    bool low_ess = false;
};

inline constexpr double kLowEssThreshold = 100.0;

ImportanceEstimate importance_expectation(std::span<const double> phi, std::span<const double> log_weights);

struct WeightMeanRow {
    int index = 0;
    double mean = 1.0;
    double stderr_ = 0.0;
    bool pass = true;
};

// Mean of exp(log Z_t) at every recorded index, with pass = |mean - 1| < 3 stderr.
std::vector<WeightMeanRow> weight_mean_check(const LogWeights& weights);

// Direct Euler scheme with drift driven by Volterra noise: X_k = x0 + sum_{j<k} b(X_j) dt + Z_k.
PathEnsemble euler_with_drift(const DiscretizedKernel& kernel, const DriftFunctional& drift, const PathEnsemble& z,
                              double x0, int workers = 1);

}  // namespace vmrf
