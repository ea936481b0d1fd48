#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "vmrf/drift.hpp"
#include "vmrf/girsanov.hpp"
#include "vmrf/graph.hpp"
#include "vmrf/path_engine.hpp"

namespace vmrf {

// Per-vertex initial law: a point mass at `mean` when sd == 0, else N(mean, sd^2).
// Vertices are independent, so the joint law is a product measure.
struct InitialLaw {
    double mean = 0.0;
    double sd = 0.0;
};

// Per-vertex drifts b_u(x_u, mean of x over N_u), with a default for unlisted vertices.
struct VertexDriftSpec {
    std::map<Vertex, DriftFunctional> drifts;
    DriftFunctional fallback = DriftFunctional::zero();
    int truncation_level = -1;  // n when produced by truncated_drift

    const DriftFunctional& at(Vertex v) const;
    double max_growth_bound(const std::vector<Vertex>& vertices) const;
};

VertexDriftSpec uniform_drift(const DriftFunctional& drift);

// b^n_u = b_u on V_{n-2} and 0 on the shell U_n.
VertexDriftSpec truncated_drift(const VertexDriftSpec& spec, const TruncatedGraph& truncated);

struct InteractingSystem {
    Graph graph;
    VertexDriftSpec drift;
    double hurst = 0.5;
    std::map<Vertex, double> hurst_override;  // per-vertex Hurst parameters
    TimeGrid grid{1.0, 16};
    InitialLaw mu0;

    double hurst_of(Vertex v) const;
};

// Discretized kernels shared by all vertices with the same Hurst parameter.
class KernelCache {
public:
    explicit KernelCache(const TimeGrid& grid) : grid_(grid) {}
    const DiscretizedKernel& get(double hurst);
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::map<double, std::unique_ptr<DiscretizedKernel>> kernels_;
};

// Joint samples of all vertex paths; states[i] belongs to vertices[i] and has
// kind state_path with X_0 in column 0.
struct SystemEnsemble {
    TimeGrid grid{1.0, 16};
    std::vector<Vertex> vertices;
    std::vector<PathEnsemble> states;
    std::uint64_t seed = 0;
    bool drifted = false;
    InitialLaw mu0;

    std::int64_t paths() const { return states.empty() ? 0 : states.front().paths(); }
    std::size_t index_of(Vertex v) const;
    const PathEnsemble& state(Vertex v) const { return states[index_of(v)]; }
};

// Euler scheme X^u_{k+1} = X^u_k + b_u(X_k) dt + dZ^u_k with independent fBm noise per
// vertex. The noise of (path p, vertex u) depends only on (seed, p, u), so the
// driftless and drifted ensembles share noise, as do systems on different truncations.
// Paths are numbered first_path .. first_path + m - 1, so a large ensemble can be
// produced in chunks with the same result.
SystemEnsemble simulate_system_euler(const InteractingSystem& system, KernelCache& kernels, std::int64_t m,
                                     std::uint64_t seed, int workers = 1, bool apply_drift = true,
                                     std::int64_t first_path = 0);

// Per-vertex log Z^u_t, their total, and the 2-clique factorization in which clique
// {u} u N_u carries log Z^u and every other clique carries 0.
struct SystemLogWeights {
    int t_index = 0;
    std::vector<Vertex> vertices;
    RowMatrix per_vertex;  // m x |V|
    std::vector<double> total;
    std::vector<VertexSet> cliques;
    RowMatrix clique_factors;  // m x |cliques|

    std::vector<double> restricted_total(const VertexSet& subset) const;
};

SystemLogWeights system_log_weights(const InteractingSystem& system, KernelCache& kernels,
                                    const SystemEnsemble& driftless, int t_index, int workers = 1);

}  // namespace vmrf
