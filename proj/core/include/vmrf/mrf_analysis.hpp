#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vmrf/interacting_system.hpp"
#include "vmrf/statistics.hpp"

namespace vmrf {

struct CITestOptions {
    int perms = 500;
    std::uint64_t seed = 0;
    // Grid nodes used to summarize the A and B paths; empty means 4 equispaced nodes N/4..N.
    std::vector<int> summary_nodes;
    // Condition on the separator's values at every node 1..N (true) or only at the
    // summary nodes (false).
    bool full_path_separator = true;
    int workers = 1;
};

struct CITestReport {
    VertexSet A, B, S;
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t paths = 0;
    int perms = 0;
    std::uint64_t seed = 0;
    int separator_features = 0;
    double ess = 0.0;
};

std::vector<int> default_summary_nodes(int N);

// Weighted least-squares residual test of X^A independent of X^B given X^S. Summaries
// of A and B are regressed on [1, S features] with importance weights; the statistic
// is the largest absolute weighted correlation between A and B residual columns, and
// the p-value comes from permuting the B residual rows. An empty weight span means
// unit weights. Throws Error(separator_degenerate) when the design is rank deficient.
CITestReport conditional_independence_test(const SystemEnsemble& ensemble, std::span<const double> log_weights,
                                           const VertexSet& A, const VertexSet& B, const VertexSet& S,
                                           const CITestOptions& options);

// Bounded functional of the A-vertex paths of one sample; receives the ensemble and a path index.
using PathFunctional = std::function<double(const SystemEnsemble&, std::int64_t)>;

struct TruncationRow {
    int n = 0;
    McEstimate estimate;
    double diff_from_previous = 0.0;  // est(n) - est(previous n); 0 for the first row
    double diff_stderr = 0.0;         // stderr of the paired per-path difference
};

struct TruncationSweep {
    std::vector<TruncationRow> rows;
    // |last difference| < |first difference| + 3 sqrt(se_first^2 + se_last^2)
    bool shrinks = false;
};

// Simulates the truncated system on G_n for every n (drifts zeroed on U_n, same noise
// for shared vertices) and estimates E[psi] per n. Requires A inside V_{min n - 3}.
TruncationSweep truncation_convergence(const GraphGenerator& graph, const VertexDriftSpec& drift, double hurst,
                                       const VertexSet& A, const PathFunctional& psi, const std::vector<int>& n_list,
                                       const TimeGrid& grid, std::int64_t m, std::uint64_t seed, const InitialLaw& mu0,
                                       int workers = 1);

struct EntropyReport {
    VertexSet A;
    VertexSet relevant;  // R = {u : ({u} u N_u) meets A}
    McEstimate estimate;  // mean of Z_R log Z_R under the driftless law
    // Opposite direction, mean of -log Z_R under the driftless law. Reported only;
    // the bound is not checked against it.
    McEstimate reverse_estimate;
    double bound = 0.0;   // C_t |A|
    double c_t = 0.0;
    double unit_energy = 0.0;       // E1(t): squared RKHS norm of the unit drift
    double max_growth = 0.0;        // largest drift certificate M
    double sup_second_moment = 0.0; // max_v E_P sup_{s<=t} |X^v_s|^2
    std::size_t max_degree = 0;
    bool pass = false;
};

// Relative-entropy estimate for the A-marginal with the linear-in-|A| bound
// C_t = (1 + max degree) M^2 E1(t) (1 + 2 sup_v E_P ||X^v||^2_{inf,t}).
EntropyReport entropy_estimate(const InteractingSystem& system, KernelCache& kernels, const SystemEnsemble& driftless,
                               const SystemLogWeights& weights, const VertexSet& A);

}  // namespace vmrf
