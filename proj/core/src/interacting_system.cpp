#include "vmrf/interacting_system.hpp"

#include <algorithm>
#include <cmath>

#include "vmrf/error.hpp"
#include "vmrf/parallel.hpp"
#include "vmrf/rng.hpp"

namespace vmrf {

const DriftFunctional& VertexDriftSpec::at(Vertex v) const {
    const auto it = drifts.find(v);
    return it == drifts.end() ? fallback : it->second;
}

double VertexDriftSpec::max_growth_bound(const std::vector<Vertex>& vertices) const {
    double m = 0.0;
    for (Vertex v : vertices) m = std::max(m, at(v).growth_bound());
    return m;
}

VertexDriftSpec uniform_drift(const DriftFunctional& drift) {
    VertexDriftSpec spec;
    spec.fallback = drift;
    return spec;
}

VertexDriftSpec truncated_drift(const VertexDriftSpec& spec, const TruncatedGraph& truncated) {
    VertexDriftSpec out;
    out.fallback = DriftFunctional::zero();
    out.truncation_level = truncated.n;
    for (Vertex v : truncated.inner) out.drifts[v] = spec.at(v);
    for (Vertex v : truncated.shell) out.drifts[v] = DriftFunctional::zero();
    return out;
}

double InteractingSystem::hurst_of(Vertex v) const {
    const auto it = hurst_override.find(v);
    return it == hurst_override.end() ? hurst : it->second;
}

const DiscretizedKernel& KernelCache::get(double hurst) {
    auto it = kernels_.find(hurst);
    if (it == kernels_.end()) {
        auto kernel = std::make_unique<DiscretizedKernel>(discretize_kernel(KernelSpec::fbm(hurst, grid_.horizon()), grid_));
        it = kernels_.emplace(hurst, std::move(kernel)).first;
    }
    return *it->second;
}

std::size_t SystemEnsemble::index_of(Vertex v) const {
    const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) fail(ErrorCode::invalid_argument, "vertex " + std::to_string(v) + " not in ensemble");
    return static_cast<std::size_t>(it - vertices.begin());
}

namespace {

struct VertexPlan {
    const DiscretizedKernel* kernel = nullptr;
    DriftFunctional drift;
    std::vector<std::size_t> neighbors;  // indices into the vertex list
};

std::vector<VertexPlan> make_plan(const InteractingSystem& system, KernelCache& kernels, const std::vector<Vertex>& verts) {
    std::vector<VertexPlan> plan(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        plan[i].kernel = &kernels.get(system.hurst_of(verts[i]));
        plan[i].drift = system.drift.at(verts[i]);
        for (Vertex u : system.graph.neighbors(verts[i]))
            plan[i].neighbors.push_back(static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), u) - verts.begin()));
    }
    return plan;
}

double neighbor_mean(const std::vector<std::size_t>& nb, const std::vector<double>& x) {
    if (nb.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t j : nb) s += x[j];
    return s / static_cast<double>(nb.size());
}

}  // namespace

SystemEnsemble simulate_system_euler(const InteractingSystem& system, KernelCache& kernels, std::int64_t m,
                                     std::uint64_t seed, int workers, bool apply_drift, std::int64_t first_path) {
    require(first_path >= 0, "simulate_system_euler: first_path must be nonnegative");
    require(m >= 1, "simulate_system_euler: need at least one path");
    if (!(kernels.grid() == system.grid)) fail(ErrorCode::shape_mismatch, "simulate_system_euler: kernel cache grid differs");
    require(system.mu0.sd >= 0.0, "initial law needs sd >= 0");
    const std::vector<Vertex> verts = system.graph.vertices();
    const std::vector<VertexPlan> plan = make_plan(system, kernels, verts);
    const int N = system.grid.steps();
    const double dt = system.grid.dt();
    const double sqdt = std::sqrt(dt);

    SystemEnsemble out;
    out.grid = system.grid;
    out.vertices = verts;
    out.seed = seed;
    out.drifted = apply_drift;
    out.mu0 = system.mu0;
    out.states.resize(verts.size());
    for (auto& st : out.states) {
        st.grid = system.grid;
        st.kind = EnsembleKind::state_path;
        st.seed = seed;
        st.values = RowMatrix::Zero(m, N + 1);
    }

    parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t p) {
        const std::size_t nv = verts.size();
        std::vector<std::vector<double>> z(nv, std::vector<double>(N + 1, 0.0));
        std::vector<double> x0(nv), x(nv), cumulative(nv, 0.0), dw(N);
        const auto path_id = static_cast<std::uint64_t>(first_path) + static_cast<std::uint64_t>(p);
        for (std::size_t i = 0; i < nv; ++i) {
            const auto vid = static_cast<std::uint64_t>(verts[i]);
            RandomStream noise(seed, StreamTag::system_noise, {path_id, vid});
            for (int k = 0; k < N; ++k) dw[k] = sqdt * noise.normal();
            const Eigen::MatrixXd& K = plan[i].kernel->matrix;
            for (int r = 0; r < N; ++r) {
                double acc = 0.0;
                for (int c = 0; c <= r; ++c) acc += K(r, c) * dw[c];
                z[i][r + 1] = acc;
            }
            x0[i] = system.mu0.mean;
            if (system.mu0.sd > 0.0) {
                RandomStream init(seed, StreamTag::initial_condition, {path_id, vid});
                x0[i] += system.mu0.sd * init.normal();
            }
            x[i] = x0[i];
            out.states[i].values(p, 0) = x0[i];
        }
        std::vector<double> b(nv);
        for (int k = 0; k < N; ++k) {
            if (apply_drift)
                for (std::size_t i = 0; i < nv; ++i) b[i] = plan[i].drift.evaluate(x[i], neighbor_mean(plan[i].neighbors, x));
            for (std::size_t i = 0; i < nv; ++i) {
                if (apply_drift) cumulative[i] += b[i] * dt;
                x[i] = x0[i] + cumulative[i] + z[i][k + 1];
                out.states[i].values(p, k + 1) = x[i];
            }
        }
    });
    return out;
}

std::vector<double> SystemLogWeights::restricted_total(const VertexSet& subset) const {
    std::vector<std::size_t> cols;
    for (Vertex v : subset) {
        const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) fail(ErrorCode::invalid_argument, "vertex " + std::to_string(v) + " not in system");
        cols.push_back(static_cast<std::size_t>(it - vertices.begin()));
    }
    std::vector<double> out(static_cast<std::size_t>(per_vertex.rows()), 0.0);
    for (Eigen::Index p = 0; p < per_vertex.rows(); ++p)
        for (std::size_t c : cols) out[p] += per_vertex(p, static_cast<Eigen::Index>(c));
    return out;
}

SystemLogWeights system_log_weights(const InteractingSystem& system, KernelCache& kernels, const SystemEnsemble& driftless,
                                    int t_index, int workers) {
    if (driftless.drifted) fail(ErrorCode::invalid_argument, "system_log_weights needs an ensemble sampled without drift");
    if (!(driftless.grid == system.grid)) fail(ErrorCode::shape_mismatch, "system_log_weights: grid mismatch");
    const int N = system.grid.steps();
    require(t_index >= 0 && t_index <= N, "system_log_weights: time index out of range");
    const std::vector<Vertex> verts = system.graph.vertices();
    if (verts != driftless.vertices) fail(ErrorCode::shape_mismatch, "system_log_weights: ensemble vertices differ from the graph");
    const std::vector<VertexPlan> plan = make_plan(system, kernels, verts);
    const std::int64_t m = driftless.paths();
    const std::size_t nv = verts.size();

    SystemLogWeights out;
    out.t_index = t_index;
    out.vertices = verts;
    out.per_vertex = RowMatrix::Zero(m, static_cast<Eigen::Index>(nv));
    out.total.assign(static_cast<std::size_t>(m), 0.0);
    out.cliques = two_cliques(system.graph);
    out.clique_factors = RowMatrix::Zero(m, static_cast<Eigen::Index>(out.cliques.size()));
    std::vector<std::size_t> clique_of(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        VertexSet closed{verts[i]};
        for (Vertex u : system.graph.neighbors(verts[i])) closed.insert(u);
        clique_of[i] = static_cast<std::size_t>(std::lower_bound(out.cliques.begin(), out.cliques.end(), closed) - out.cliques.begin());
    }

    parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t p) {
        std::vector<double> xk(nv), dw(N), b(N), traj(N + 1);
        std::vector<std::vector<double>> b_all(nv, std::vector<double>(N, 0.0));
        for (int k = 0; k < N; ++k) {
            for (std::size_t i = 0; i < nv; ++i) xk[i] = driftless.states[i].values(p, k);
            for (std::size_t i = 0; i < nv; ++i)
                if (!plan[i].drift.is_zero()) b_all[i][k] = plan[i].drift.evaluate(xk[i], neighbor_mean(plan[i].neighbors, xk));
        }
        double total = 0.0;
        for (std::size_t i = 0; i < nv; ++i) {
            double log_z = 0.0;
            if (!plan[i].drift.is_zero()) {
                const Eigen::MatrixXd& K = plan[i].kernel->matrix;
                const auto& row = driftless.states[i].values;
                const double x0 = row(p, 0);
                for (int r = 0; r < N; ++r) {
                    double acc = row(p, r + 1) - x0;
                    for (int c = 0; c < r; ++c) acc -= K(r, c) * dw[c];
                    dw[r] = acc / K(r, r);
                }
                log_weight_trajectory(*plan[i].kernel, b_all[i], dw, traj);
                log_z = traj[t_index];
            }
            out.per_vertex(p, static_cast<Eigen::Index>(i)) = log_z;
            out.clique_factors(p, static_cast<Eigen::Index>(clique_of[i])) += log_z;
            total += log_z;
        }
        out.total[p] = total;
    });
    return out;
}

}  // namespace vmrf
