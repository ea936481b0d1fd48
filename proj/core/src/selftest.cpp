#include "vmrf/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <initializer_list>
#include <limits>
#include <numeric>

#include <Eigen/LU>
#include <json.hpp>

#include "vmrf/discrete_fundamental.hpp"
#include "vmrf/error.hpp"
#include "vmrf/girsanov.hpp"
#include "vmrf/interacting_system.hpp"
#include "vmrf/mrf_analysis.hpp"
#include "vmrf/parallel.hpp"
#include "vmrf/path_engine.hpp"
#include "vmrf/rng.hpp"
#include "vmrf/statistics.hpp"

#ifndef VMRF_VERSION
#define VMRF_VERSION "unknown"
#endif

namespace vmrf {

namespace {

using Values = std::initializer_list<Measurement>;

CheckResult check(std::string name, bool pass, Values values) {
    return CheckResult{std::move(name), pass, std::vector<Measurement>(values)};
}

// Seeds for the individual experiments of a criterion, all derived from the suite seed.
std::uint64_t sub_seed(const SelftestOptions& o, int criterion, std::uint64_t k) {
    return derive_stream_seed(o.seed, StreamTag::brownian, {0x5e1f7e57ULL, static_cast<std::uint64_t>(criterion), k});
}

std::int64_t mc_paths(const SelftestOptions& o) { return o.quick ? 10000 : 100000; }

std::vector<double> column(const RowMatrix& values, int k) {
    std::vector<double> out(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index p = 0; p < values.rows(); ++p) out[p] = values(p, k);
    return out;
}

// ---------------------------------------------------------------------------
// 1. Kernel isometry on an 8 x 8 probe grid

void criterion_isometry(const SelftestOptions& o, CriterionResult& r) {
    const QuadratureSpec quad{64, 1e-10, 10};
    for (double H : {0.3, 0.5, 0.7}) {
        const KernelSpec spec = KernelSpec::fbm(H);
        std::vector<double> residual(64, 0.0);
        std::vector<double> failed_tol(64, 0.0);
        parallel_for(64, o.workers, [&](std::size_t idx) {
            const double t = (static_cast<double>(idx / 8) + 1.0) / 8.0;
            const double s = (static_cast<double>(idx % 8) + 1.0) / 8.0;
            try {
                residual[idx] = isometry_residual(spec, t, s, quad);
            } catch (const QuadFailure& e) {
                residual[idx] = std::numeric_limits<double>::infinity();
                failed_tol[idx] = e.achieved_tolerance();
            }
        });
        const double worst = *std::max_element(residual.begin(), residual.end());
        const auto quad_failures = std::count_if(failed_tol.begin(), failed_tol.end(), [](double v) { return v > 0.0; });
        r.checks.push_back(check("isometry H=" + std::to_string(H).substr(0, 3), worst < 1e-4,
                                 {{"max_residual", worst}, {"probes", 64.0}, {"quad_failures", double(quad_failures)}}));
    }
}

// ---------------------------------------------------------------------------
// 2. Discrete fundamental martingale

void criterion_discrete_fundamental(const SelftestOptions& o, CriterionResult& r) {
    double worst_rel = 0.0, min_lambda = std::numeric_limits<double>::infinity();
    for (int h = 1; h <= 9; ++h) {
        const HurstParam H(h / 10.0);
        for (int n = 1; n <= 64; ++n) {
            const IncrementCovariance cov = build_covariance(H, n);
            const InverseState state = recursive_inverse(cov.matrix);
            const Eigen::MatrixXd dense = cov.matrix.partialPivLu().inverse();
            worst_rel = std::max(worst_rel, (state.inv - dense).cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff());
            for (double l : state.lambdas) min_lambda = std::min(min_lambda, l);
        }
    }
    r.checks.push_back(check("recursive inverse vs dense LU, n<=64, H=0.1..0.9", worst_rel < 1e-8,
                             {{"max_relative_error", worst_rel}}));
    r.checks.push_back(check("all lambda_n > 0", min_lambda > 0.0, {{"min_lambda", min_lambda}}));

    double min_margin = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= 64; ++n) min_margin = std::min(min_margin, gershgorin_margin(HurstParam(0.3), n));
    r.checks.push_back(check("Gershgorin margin H=0.3, n<=64", min_margin >= 0.5, {{"min_margin", min_margin}}));
    r.info.push_back({"gershgorin_margin_H0.7_n10", gershgorin_margin(HurstParam(0.7), 10)});

    std::uint64_t k = 0;
    for (double H : {0.3, 0.5, 0.7})
        for (int n : {2, 4, 8}) {
            const McEstimate est = martingale_orthogonality_stat(HurstParam(H), n, mc_paths(o), sub_seed(o, 2, k++), o.workers);
            r.checks.push_back(check("orthogonality H=" + std::to_string(H).substr(0, 3) + " n=" + std::to_string(n),
                                     std::abs(est.estimate) < 3.0 * est.stderr_,
                                     {{"estimate", est.estimate}, {"stderr", est.stderr_}}));
        }
}

// ---------------------------------------------------------------------------
// 3. Fundamental transform

CheckResult brownian_covariance_check(const std::string& name, const PathEnsemble& wstar) {
    const int N = wstar.grid.steps();
    bool pass = true;
    double worst_z = 0.0, worst_bias = 0.0;
    for (const auto& probe : brownian_covariance_probes(wstar, {N / 4, N / 2, 3 * N / 4, N})) {
        const double bias = std::abs(probe.estimate - probe.target);
        pass = pass && probe.within(3.0);
        worst_bias = std::max(worst_bias, bias);
        worst_z = std::max(worst_z, bias / probe.stderr_);
    }
    return check(name, pass, {{"max_abs_bias", worst_bias}, {"max_bias_over_stderr", worst_z}, {"pairs", 10.0}});
}

void criterion_fundamental_transform(const SelftestOptions& o, CriterionResult& r) {
    const TimeGrid grid(1.0, 32);
    const std::int64_t m = mc_paths(o);
    std::uint64_t k = 0;
    for (double H : {0.3, 0.7}) {
        const std::string tag = " H=" + std::to_string(H).substr(0, 3);
        const KernelSpec spec = KernelSpec::fbm(H);
        const DiscretizedKernel K = discretize_kernel(spec, grid);
        {
            const PathEnsemble bm = sample_bm(grid, m, sub_seed(o, 3, k++), o.workers);
            const PathEnsemble z = volterra_paths(K, bm, o.workers);
            const PathEnsemble w = fundamental_transform(K, z, o.workers);
            const double err = (w.values - bm.values).cwiseAbs().maxCoeff();
            r.checks.push_back(check("round trip Z <-> W*" + tag, err < 1e-10, {{"max_abs_error", err}}));
            r.checks.push_back(brownian_covariance_check("Cov(W*) = t^s, pipeline paths" + tag, w));
        }
        {
            const PathEnsemble z = cholesky_oracle_paths(spec, grid, m, sub_seed(o, 3, k++), o.workers);
            const PathEnsemble w = fundamental_transform(K, z, o.workers);
            r.checks.push_back(brownian_covariance_check("Cov(W*) = t^s, exact-covariance paths" + tag, w));
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Drift transform

// q for b = 1 and H = 0.3 is C s^{1/2-H}; C from an independent high-precision
// evaluation of 1 / int_0^1 K(1, s) s^{0.2} ds.
constexpr double kUnitDriftConstant = 1.21713822346653828;
// B(3/2-H, 1/2-H) at H = 0.3, with and without the (1/2-H) prefactor.
constexpr double kBetaFormConstant = 4.75075069494218371;
constexpr double kBetaFormConstantWithPrefactor = 0.950150138988436742;

void criterion_drift_transform(const SelftestOptions&, CriterionResult& r) {
    const TimeGrid grid(1.0, 128);
    for (double H : {0.3, 0.7}) {
        const DiscretizedKernel K = discretize_kernel(KernelSpec::fbm(H), grid);
        double worst = 0.0;
        for (int family = 0; family < 2; ++family) {
            Eigen::VectorXd B(grid.steps() + 1);
            for (int i = 0; i <= grid.steps(); ++i) {
                const double t = grid.node(i);
                B(i) = family == 0 ? t : std::sin(2.0 * t) / 2.0 + 0.3 * t * t;
            }
            const Eigen::VectorXd q = drift_q_transform(K, B);
            worst = std::max(worst, (reconstruct_cumulative_drift(K, q) - B).cwiseAbs().maxCoeff());
        }
        r.checks.push_back(check("reconstruction K(q dt) = B, H=" + std::to_string(H).substr(0, 3), worst < 1e-10,
                                 {{"max_abs_error", worst}}));
        if (H != 0.3) continue;

        Eigen::VectorXd B(grid.steps() + 1);
        for (int i = 0; i <= grid.steps(); ++i) B(i) = grid.node(i);
        const Eigen::VectorXd q = drift_q_transform(K, B);
        const double dt = grid.dt();
        double max_err = 0.0, num = 0.0, den = 0.0;
        for (int j = 0; j < grid.steps(); ++j) {
            const double a = grid.node(j), b = grid.node(j + 1);
            if (a < 0.1) continue;
            const double shape = (std::pow(b, 1.2) - std::pow(a, 1.2)) / (1.2 * dt);  // cell mean of s^{0.2}
            max_err = std::max(max_err, std::abs(q(j) - kUnitDriftConstant * shape));
            num += q(j) * shape;
            den += shape * shape;
        }
        const double fitted = num / den;
        r.checks.push_back(check("closed form C s^{0.2}, H=0.3, s>=0.1", max_err < 1e-3, {{"max_abs_error", max_err}}));
        r.info.push_back({"fitted_constant", fitted});
        r.info.push_back({"fitted_over_oracle_constant", fitted / kUnitDriftConstant});
        r.info.push_back({"fitted_over_beta_form", fitted / kBetaFormConstant});
        r.info.push_back({"fitted_over_beta_form_with_prefactor", fitted / kBetaFormConstantWithPrefactor});
    }
}

// ---------------------------------------------------------------------------
// 5. Girsanov martingale

void criterion_girsanov(const SelftestOptions& o, CriterionResult& r) {
    const TimeGrid grid(1.0, 40);
    const std::vector<int> indices{8, 16, 24, 32, 40};
    std::uint64_t k = 0;
    for (double H : {0.3, 0.5, 0.7}) {
        const DiscretizedKernel K = discretize_kernel(KernelSpec::fbm(H), grid);
        const PathEnsemble z = volterra_paths(K, sample_bm(grid, mc_paths(o), sub_seed(o, 5, k++), o.workers), o.workers);
        for (const DriftFunctional& drift : {DriftFunctional::constant(0.5), DriftFunctional::bounded_tanh(1.0, 1.0)}) {
            const LogWeights lw = girsanov_log_weight(K, drift, z, 0.0, indices, o.workers);
            const auto rows = weight_mean_check(lw);
            bool pass = true;
            double worst = 0.0;
            CheckResult c{"E[Z_t] = 1, H=" + std::to_string(H).substr(0, 3) + " drift " + drift.to_string(), true, {}};
            for (const auto& row : rows) {
                pass = pass && row.pass;
                worst = std::max(worst, std::abs(row.mean - 1.0) / row.stderr_);
                c.values.push_back({"mean_t" + std::to_string(row.index), row.mean});
                c.values.push_back({"stderr_t" + std::to_string(row.index), row.stderr_});
            }
            c.values.push_back({"max_deviation_over_stderr", worst});
            c.pass = pass;
            r.checks.push_back(std::move(c));
        }
    }
}

// ---------------------------------------------------------------------------
// 6. Weak-solution equivalence

void compare_estimates(CriterionResult& r, const std::string& name, const McEstimate& is, const McEstimate& euler) {
    const double combined = std::hypot(is.stderr_, euler.stderr_);
    r.checks.push_back(check(name, std::abs(is.estimate - euler.estimate) < 3.0 * combined,
                             {{"reweighted", is.estimate},
                              {"reweighted_stderr", is.stderr_},
                              {"euler", euler.estimate},
                              {"euler_stderr", euler.stderr_}}));
}

McEstimate as_mc(const ImportanceEstimate& e) { return {e.estimate, e.stderr_}; }

void criterion_weak_solution(const SelftestOptions& o, CriterionResult& r) {
    const std::int64_t m = mc_paths(o);
    const TimeGrid grid(1.0, 16);
    const int N = grid.steps();
    std::uint64_t k = 0;

    // Single vertex, mean-reverting drift.
    const double x0 = 0.2;
    const DriftFunctional drift = DriftFunctional::linear(0.5, -1.0);
    for (double H : {0.3, 0.7}) {
        const std::string tag = " single vertex H=" + std::to_string(H).substr(0, 3);
        const DiscretizedKernel K = discretize_kernel(KernelSpec::fbm(H), grid);
        const PathEnsemble zp = volterra_paths(K, sample_bm(grid, m, sub_seed(o, 6, k++), o.workers), o.workers);
        const PathEnsemble ze = volterra_paths(K, sample_bm(grid, m, sub_seed(o, 6, k++), o.workers), o.workers);
        const std::vector<double> lw = girsanov_log_weight(K, drift, zp, x0, {N}, o.workers).at_index(N);
        std::vector<double> phi1(zp.paths()), phi2(zp.paths());
        for (Eigen::Index p = 0; p < zp.values.rows(); ++p) {
            phi1[p] = x0 + zp.values(p, N);
            phi2[p] = phi1[p] * phi1[p];
        }
        const ImportanceEstimate is1 = importance_expectation(phi1, lw), is2 = importance_expectation(phi2, lw);
        const PathEnsemble x = euler_with_drift(K, drift, ze, x0, o.workers);
        std::vector<double> e1 = column(x.values, N), e2(e1.size());
        std::transform(e1.begin(), e1.end(), e2.begin(), [](double v) { return v * v; });
        compare_estimates(r, "E[X_T]" + tag, as_mc(is1), mean_estimate(e1));
        compare_estimates(r, "E[X_T^2]" + tag, as_mc(is2), mean_estimate(e2));
        r.info.push_back({"ess" + tag, is1.ess});
    }

    // Five-vertex path graph with neighbour coupling.
    InteractingSystem sys;
    sys.graph = path_graph(5);
    sys.drift = uniform_drift(DriftFunctional::neighbor_linear(0.2, -0.5, 0.4));
    sys.hurst = 0.3;
    sys.grid = grid;
    sys.mu0 = {0.0, 0.0};
    KernelCache cache(grid);
    const SystemEnsemble free = simulate_system_euler(sys, cache, m, sub_seed(o, 6, k++), o.workers, false);
    const SystemLogWeights lw = system_log_weights(sys, cache, free, N, o.workers);
    const SystemEnsemble drifted = simulate_system_euler(sys, cache, m, sub_seed(o, 6, k++), o.workers, true);
    for (Vertex v : free.vertices) {
        const std::string tag = " path graph H=0.3 vertex " + std::to_string(v);
        std::vector<double> phi1 = column(free.state(v).values, N), phi2(phi1.size());
        std::transform(phi1.begin(), phi1.end(), phi2.begin(), [](double x) { return x * x; });
        std::vector<double> e1 = column(drifted.state(v).values, N), e2(e1.size());
        std::transform(e1.begin(), e1.end(), e2.begin(), [](double x) { return x * x; });
        compare_estimates(r, "E[X_T]" + tag, as_mc(importance_expectation(phi1, lw.total)), mean_estimate(e1));
        compare_estimates(r, "E[X_T^2]" + tag, as_mc(importance_expectation(phi2, lw.total)), mean_estimate(e2));
    }
    r.info.push_back({"ess path graph", importance_expectation(column(free.state(0).values, N), lw.total).ess});
}

// ---------------------------------------------------------------------------
// 7. 2-MRF statistical contract

InteractingSystem five_path(const DriftFunctional& drift, double H, int N) {
    InteractingSystem sys;
    sys.graph = path_graph(5);
    sys.drift = uniform_drift(drift);
    sys.hurst = H;
    sys.grid = TimeGrid(1.0, N);
    sys.mu0 = {0.0, 0.0};
    return sys;
}

void criterion_mrf(const SelftestOptions& o, CriterionResult& r) {
    const int coupled_reps = o.quick ? 20 : 50;
    const int null_reps = 200;
    const std::int64_t m = o.quick ? 500 : 1000;
    const int N = 8;
    const VertexSet A{0}, B{4};
    const VertexSet S = boundary2(path_graph(5), A);

    CITestOptions ci;
    ci.perms = 500;
    ci.workers = o.workers;

    const InteractingSystem coupled = five_path(DriftFunctional::neighbor_linear(0.0, -0.5, 0.8), 0.3, N);
    KernelCache cache(coupled.grid);
    int rejections = 0, small_sep_rejections = 0, reweighted_rejections = 0;
    for (int rep = 0; rep < coupled_reps; ++rep) {
        const std::uint64_t seed = sub_seed(o, 7, static_cast<std::uint64_t>(rep));
        ci.seed = seed;
        const SystemEnsemble ens = simulate_system_euler(coupled, cache, m, seed, o.workers, true);
        if (conditional_independence_test(ens, {}, A, B, S, ci).p_value <= 0.05) ++rejections;
        if (conditional_independence_test(ens, {}, A, B, {1}, ci).p_value <= 0.05) ++small_sep_rejections;
        const SystemEnsemble free = simulate_system_euler(coupled, cache, m, seed, o.workers, false);
        const SystemLogWeights lw = system_log_weights(coupled, cache, free, N, o.workers);
        if (conditional_independence_test(free, lw.total, A, B, S, ci).p_value <= 0.05) ++reweighted_rejections;
    }
    const double rate = static_cast<double>(rejections) / coupled_reps;
    const double limit = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / coupled_reps);
    r.checks.push_back(check("coupled drift, S = d2A = {1,2}: rejection rate at 0.05", rate <= limit,
                             {{"rejection_rate", rate}, {"limit", limit}, {"repetitions", double(coupled_reps)}}));
    r.info.push_back({"power_with_S={1}", static_cast<double>(small_sep_rejections) / coupled_reps});
    r.info.push_back({"rejection_rate_reweighted_sampler", static_cast<double>(reweighted_rejections) / coupled_reps});

    const InteractingSystem null_sys = five_path(DriftFunctional::zero(), 0.3, N);
    std::vector<double> p_values(null_reps);
    int null_rejections = 0;
    for (int rep = 0; rep < null_reps; ++rep) {
        const std::uint64_t seed = sub_seed(o, 7, 1000 + static_cast<std::uint64_t>(rep));
        ci.seed = seed;
        const SystemEnsemble ens = simulate_system_euler(null_sys, cache, m, seed, o.workers, false);
        p_values[rep] = conditional_independence_test(ens, {}, A, B, S, ci).p_value;
        if (p_values[rep] <= 0.05) ++null_rejections;
    }
    const double ks = ks_distance_uniform(p_values);
    r.checks.push_back(check("null calibration: KS distance of p-values", ks < 0.1,
                             {{"ks_distance", ks}, {"repetitions", double(null_reps)}}));
    r.info.push_back({"null_rejection_rate", static_cast<double>(null_rejections) / null_reps});
}

// ---------------------------------------------------------------------------
// 8. Truncation convergence

void criterion_truncation(const SelftestOptions& o, CriterionResult& r) {
    const TimeGrid grid(1.0, 16);
    const PathFunctional psi = [](const SystemEnsemble& e, std::int64_t p) {
        return std::clamp(e.state(0).values(p, e.grid.steps()), -10.0, 10.0);
    };
    const TruncationSweep sweep =
        truncation_convergence(zline_generator(), uniform_drift(DriftFunctional::neighbor_linear(0.3, -0.5, 0.4)), 0.3,
                               {0}, psi, {4, 5, 6, 7}, grid, mc_paths(o), sub_seed(o, 8, 0), {1.0, 0.0}, o.workers);
    CheckResult c{"|d(7,6)| < |d(5,4)| + 3 combined stderr", sweep.shrinks, {}};
    for (const auto& row : sweep.rows) {
        const std::string n = std::to_string(row.n);
        c.values.push_back({"estimate_n" + n, row.estimate.estimate});
        c.values.push_back({"stderr_n" + n, row.estimate.stderr_});
        c.values.push_back({"diff_n" + n, row.diff_from_previous});
        c.values.push_back({"diff_stderr_n" + n, row.diff_stderr});
    }
    r.checks.push_back(std::move(c));
}

// ---------------------------------------------------------------------------
// 9. Entropy bound

void criterion_entropy(const SelftestOptions& o, CriterionResult& r) {
    const std::int64_t m = mc_paths(o);
    const int N = 16;
    std::uint64_t k = 0;
    for (double H : {0.3, 0.7}) {
        const InteractingSystem sys = five_path(DriftFunctional::neighbor_linear(0.2, -0.5, 0.4), H, N);
        KernelCache cache(sys.grid);
        const SystemEnsemble free = simulate_system_euler(sys, cache, m, sub_seed(o, 9, k++), o.workers, false);
        const SystemLogWeights lw = system_log_weights(sys, cache, free, N, o.workers);
        double previous_ratio = 0.0, previous_se = 0.0;
        bool trend = true;
        for (const VertexSet& A : {VertexSet{2}, VertexSet{2, 3}, VertexSet{1, 2, 3}}) {
            const EntropyReport e = entropy_estimate(sys, cache, free, lw, A);
            const double size = static_cast<double>(A.size());
            r.checks.push_back(check("H_hat <= C_t |A|, H=" + std::to_string(H).substr(0, 3) + " A=" + format_vertex_set(A),
                                     e.pass,
                                     {{"estimate", e.estimate.estimate},
                                      {"stderr", e.estimate.stderr_},
                                      {"bound", e.bound},
                                      {"c_t", e.c_t}}));
            const double ratio = e.estimate.estimate / size, se = e.estimate.stderr_ / size;
            if (A.size() > 1) trend = trend && ratio <= previous_ratio + 3.0 * std::hypot(se, previous_se);
            previous_ratio = ratio;
            previous_se = se;
        }
        r.info.push_back({"per_vertex_entropy_nonincreasing_H" + std::to_string(H).substr(0, 3), trend ? 1.0 : 0.0});
    }

    vmrf::Graph single;
    single.add_vertex(0);
    const double theta = 0.8;
    InteractingSystem sys;
    sys.graph = single;
    sys.drift = uniform_drift(DriftFunctional::constant(theta));
    sys.hurst = 0.5;
    sys.grid = TimeGrid(1.0, N);
    KernelCache cache(sys.grid);
    const SystemEnsemble free = simulate_system_euler(sys, cache, m, sub_seed(o, 9, k++), o.workers, false);
    const SystemLogWeights lw = system_log_weights(sys, cache, free, N, o.workers);
    const EntropyReport e = entropy_estimate(sys, cache, free, lw, {0});
    const double exact = 0.5 * theta * theta;
    r.checks.push_back(check("Brownian single vertex: H_hat = theta^2 T / 2", e.estimate.within(exact, 3.0),
                             {{"estimate", e.estimate.estimate}, {"stderr", e.estimate.stderr_}, {"exact", exact}}));
    r.checks.push_back(check("Brownian single vertex: H_hat <= C_t", e.pass, {{"bound", e.bound}}));
}

// ---------------------------------------------------------------------------
// 10. Determinism

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void criterion_determinism(const SelftestOptions& o, CriterionResult& r) {
    SelftestOptions sub = o;
    sub.quick = true;
    sub.only = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    sub.workers = 1;
    const std::string first = results_json(run_selftest(sub));
    sub.workers = 3;
    const std::string second = results_json(run_selftest(sub));
    // The hash is split in two exactly representable halves.
    const std::uint64_t h = fnv1a(first);
    r.checks.push_back(check("quick suite results identical for 1 and 3 workers", first == second,
                             {{"bytes", double(first.size())},
                              {"fnv1a_hi", double(h >> 32)},
                              {"fnv1a_lo", double(h & 0xffffffffULL)}}));
}

}  // namespace

bool SelftestReport::pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

std::string criterion_title(int id) {
    switch (id) {
        case 1: return "kernel isometry";
        case 2: return "discrete fundamental martingale";
        case 3: return "fundamental transform";
        case 4: return "drift transform";
        case 5: return "Girsanov martingale";
        case 6: return "weak-solution equivalence";
        case 7: return "2-MRF statistical contract";
        case 8: return "truncation convergence";
        case 9: return "entropy bound";
        case 10: return "determinism";
        default: fail(ErrorCode::invalid_argument, "no criterion " + std::to_string(id));
    }
}

double criterion_budget_seconds(int id) {
    static constexpr double budgets[] = {10, 60, 60, 5, 120, 300, 600, 300, 120, 600};
    require(id >= 1 && id <= kCriterionCount, "no criterion " + std::to_string(id));
    return budgets[id - 1];
}

CriterionResult run_criterion(int id, const SelftestOptions& options) {
    CriterionResult r;
    r.id = id;
    r.title = criterion_title(id);
    r.budget_seconds = criterion_budget_seconds(id);
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: criterion_isometry(options, r); break;
            case 2: criterion_discrete_fundamental(options, r); break;
            case 3: criterion_fundamental_transform(options, r); break;
            case 4: criterion_drift_transform(options, r); break;
            case 5: criterion_girsanov(options, r); break;
            case 6: criterion_weak_solution(options, r); break;
            case 7: criterion_mrf(options, r); break;
            case 8: criterion_truncation(options, r); break;
            case 9: criterion_entropy(options, r); break;
            case 10: criterion_determinism(options, r); break;
        }
        r.pass = !r.checks.empty() &&
                 std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; });
    } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SelftestReport run_selftest(const SelftestOptions& options) {
    SelftestReport report;
    report.options = options;
    std::vector<int> ids = options.only;
    if (ids.empty()) {
        ids.resize(kCriterionCount);
        std::iota(ids.begin(), ids.end(), 1);
    }
    for (int id : ids) report.criteria.push_back(run_criterion(id, options));
    return report;
}

std::string results_json(const SelftestReport& report) {
    using nlohmann::ordered_json;
    auto values_object = [](const std::vector<Measurement>& values) {
        ordered_json obj = ordered_json::object();
        for (const auto& v : values) obj[v.name] = v.value;
        return obj;
    };
    ordered_json doc;
    doc["suite"] = "vmrf-selftest";
    doc["version"] = VMRF_VERSION;
    doc["seed"] = report.options.seed;
    doc["quick"] = report.options.quick;
    doc["pass"] = report.pass();
    ordered_json criteria = ordered_json::array();
    for (const auto& c : report.criteria) {
        ordered_json item;
        item["id"] = c.id;
        item["title"] = c.title;
        item["pass"] = c.pass;
        ordered_json checks = ordered_json::array();
        for (const auto& ch : c.checks)
            checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"values", values_object(ch.values)}});
        item["checks"] = std::move(checks);
        item["info"] = values_object(c.info);
        if (!c.error.empty()) item["error"] = c.error;
        criteria.push_back(std::move(item));
    }
    doc["criteria"] = std::move(criteria);
    return doc.dump(2);
}

std::string timing_json(const SelftestReport& report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["workers"] = report.options.workers;
    ordered_json rows = ordered_json::array();
    double total = 0.0;
    for (const auto& c : report.criteria) {
        rows.push_back({{"id", c.id},
                        {"seconds", c.seconds},
                        {"budget_seconds", c.budget_seconds},
                        {"within_budget", c.within_budget()}});
        total += c.seconds;
    }
    doc["criteria"] = std::move(rows);
    doc["total_seconds"] = total;
    return doc.dump(2);
}

}  // namespace vmrf
