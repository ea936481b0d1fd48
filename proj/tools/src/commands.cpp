#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

#include "vmrf/discrete_fundamental.hpp"
#include "vmrf/error.hpp"
#include "vmrf/girsanov.hpp"
#include "vmrf/graph.hpp"
#include "vmrf/interacting_system.hpp"
#include "vmrf/mrf_analysis.hpp"
#include "vmrf/path_engine.hpp"
#include "vmrf/rng.hpp"
#include "vmrf/selftest.hpp"
#include "vmrf/volterra_kernels.hpp"

#ifndef VMRF_VERSION
#define VMRF_VERSION "unknown"
#endif

namespace vmrf::cli {

// Every subcommand gets its own instance so that defaults can differ per command.
struct Settings {
    double hurst = 0.3;
    int grid = 32;
    double horizon = 1.0;
    std::int64_t paths = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string drift = "zero";
    std::string graph = "path:5";
    std::string set_a = "0";
    std::string set_b = "4";
    std::string set_s;
    std::vector<std::string> sets;
    std::vector<int> n_list{4, 5, 6, 7};
    double x0 = 0.0;
    double x0_sd = 0.0;
    int n = 5;
    double scale = 0.0;
    std::string method = "volterra";
    std::string source = "both";
    std::string sampler = "euler";
    std::string input;
    int perms = 500;
    int reps = 1;
    double level = 0.05;
    double cap = kDefaultNovikovCap;
    double clip = 10.0;
    bool quick = false;
    std::vector<int> only;
    std::string out;
    std::string csv;
    std::string ensemble_out;
    std::string results_out;
    std::string config;  // consumed by expand_config, declared for --help

    // Effective value of every option bound to this instance, in declaration order.
    std::vector<std::pair<std::string, std::function<Json()>>> fields;

    Json config_json() const {
        Json cfg = Json::object();
        for (const auto& [name, value] : fields) cfg[name] = value();
        return cfg;
    }
};

namespace {

Json mc_json(const McEstimate& e) { return {{"estimate", e.estimate}, {"stderr", e.stderr_}}; }

Json importance_json(const ImportanceEstimate& e) {
    return {{"estimate", e.estimate},
            {"stderr", e.stderr_},
            {"self_normalized", e.self_normalized},
            {"self_normalized_stderr", e.self_normalized_stderr},
            {"weight_mean", e.weight_mean},
            {"ess", e.ess},
            {"low_ess", e.low_ess}};
}

std::vector<int> equispaced(int N, int count) {
    std::vector<int> idx;
    for (int k = 1; k <= count; ++k) idx.push_back(std::max(1, (k * N) / count));
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

Json vertex_set_json(const VertexSet& s) { return Json(std::vector<Vertex>(s.begin(), s.end())); }

InteractingSystem make_system(const Settings& s, const Graph& g) {
    InteractingSystem sys;
    sys.graph = g;
    sys.drift = uniform_drift(parse_drift(s.drift));
    sys.hurst = s.hurst;
    sys.grid = TimeGrid(s.horizon, s.grid);
    sys.mu0 = {s.x0, s.x0_sd};
    return sys;
}

// --- kernel-table ----------------------------------------------------------

Outcome run_kernel_table(const Settings& s) {
    const KernelSpec spec = KernelSpec::fbm(s.hurst, s.horizon);
    const TimeGrid grid(s.horizon, s.grid);
    std::ostringstream csv;
    CsvWriter w(csv);
    w.header({"t", "s", "K", "L", "R"});
    long rows = 0;
    for (int i = 1; i <= grid.steps(); ++i)
        for (int j = 1; j < i; ++j) {
            const double t = grid.node(i), u = grid.node(j);
            w.row({t, u, kernel_K(spec, t, u), kernel_L(spec, t, u), covariance_R(spec, t, u)});
            ++rows;
        }
    write_output(s.csv, csv.str());
    Outcome o;
    o.results["rows"] = rows;
    if (!spec.is_brownian()) o.results["normalization_constant"] = normalization_constant(spec.hurst());
    return o;
}

// --- weights ---------------------------------------------------------------

Outcome run_weights(const Settings& s) {
    const HurstParam H(s.hurst);
    require(s.n >= 1, "weights: --n must be positive");
    const double step = s.scale > 0.0 ? s.scale : 1.0 / s.n;
    const FundamentalWeights fw = fundamental_weights(H, s.n, step);
    std::ostringstream csv;
    CsvWriter w(csv);
    w.header({"index", "scaled", "unscaled", "listing"});
    for (int i = 0; i < s.n; ++i) w.row(i, {fw.scaled(i), fw.unscaled(i), -0.5 * fw.scaled(i)});
    write_output(s.csv, csv.str());

    const InverseState state = recursive_inverse(build_covariance(H, s.n, step).matrix);
    Outcome o;
    o.results["step"] = step;
    o.results["lnd_margin"] = state.lnd_margin();
    o.results["min_lambda"] = *std::min_element(state.lambdas.begin(), state.lambdas.end());
    o.results["gershgorin_margin"] = gershgorin_margin(H, s.n);
    o.results["scaled_sum"] = fw.scaled.sum();
    return o;
}

// --- simulate --------------------------------------------------------------

Outcome run_simulate(const Settings& s) {
    const TimeGrid grid(s.horizon, s.grid);
    const KernelSpec spec = KernelSpec::fbm(s.hurst, s.horizon);
    const DriftFunctional drift = parse_drift(s.drift);
    const int N = grid.steps();
    PathEnsemble ens;
    double model_variance = std::pow(s.horizon, 2.0 * s.hurst);
    if (s.method == "cholesky") {
        require(drift.is_zero(), "simulate: --method cholesky only produces driftless paths");
        ens = cholesky_oracle_paths(spec, grid, s.paths, s.seed, s.workers);
    } else if (s.method == "volterra") {
        const DiscretizedKernel K = discretize_kernel(spec, grid);
        model_variance = discretized_covariance(K)(N - 1, N - 1);
        ens = volterra_paths(K, sample_bm(grid, s.paths, s.seed, s.workers), s.workers);
        if (!drift.is_zero() || s.x0 != 0.0) ens = euler_with_drift(K, drift, ens, s.x0, s.workers);
    } else {
        fail(ErrorCode::invalid_argument, "simulate: unknown --method " + s.method);
    }
    if (s.method == "cholesky" && s.x0 != 0.0) {
        ens.values.array() += s.x0;
        ens.kind = EnsembleKind::state_path;
    }
    if (!s.ensemble_out.empty()) write_ensemble_binary(ens, s.ensemble_out);
    if (!s.csv.empty()) write_ensemble_csv(ens, s.csv);

    std::vector<double> terminal(static_cast<std::size_t>(ens.paths()));
    for (Eigen::Index p = 0; p < ens.values.rows(); ++p) terminal[p] = ens.values(p, N);
    Outcome o;
    o.results["kind"] = ensemble_kind_name(ens.kind);
    o.results["paths"] = ens.paths();
    o.results["terminal_mean"] = mc_json(mean_estimate(terminal));
    o.results["terminal_variance"] = sample_covariance(terminal, terminal);
    if (drift.is_zero()) o.results["model_terminal_variance"] = model_variance;
    return o;
}

// --- transform-check -------------------------------------------------------

// The ten probes share most of their noise, so each is held to a Bonferroni bound:
// two-sided family level 0.01 over 10 probes, z = Phi^{-1}(1 - 0.0005).
constexpr double kProbeZ = 3.2905267314919255;

Json probes_json(const std::vector<CovarianceProbe>& probes, bool& pass) {
    Json arr = Json::array();
    for (const auto& p : probes) {
        pass = pass && p.within(kProbeZ);
        arr.push_back({{"i", p.i}, {"j", p.j}, {"target", p.target}, {"estimate", p.estimate}, {"stderr", p.stderr_},
                       {"pass", p.within(kProbeZ)}});
    }
    return arr;
}

Outcome run_transform_check(const Settings& s) {
    Outcome o;
    if (!s.input.empty()) {
        const PathEnsemble z = read_ensemble_binary(s.input);
        const DiscretizedKernel K = discretize_kernel(KernelSpec::fbm(s.hurst, z.grid.horizon()), z.grid);
        const PathEnsemble w = fundamental_transform(K, z, s.workers);
        const int N = z.grid.steps();
        o.results["input"] = s.input;
        o.results["covariance"] = probes_json(brownian_covariance_probes(w, equispaced(N, 4)), o.pass);
        return o;
    }
    const TimeGrid grid(s.horizon, s.grid);
    const KernelSpec spec = KernelSpec::fbm(s.hurst, s.horizon);
    const DiscretizedKernel K = discretize_kernel(spec, grid);
    const std::vector<int> nodes = equispaced(grid.steps(), 4);
    require(s.source == "both" || s.source == "pipeline" || s.source == "cholesky",
            "transform-check: --source must be pipeline, cholesky or both");
    if (s.source != "cholesky") {
        const PathEnsemble bm = sample_bm(grid, s.paths, s.seed, s.workers);
        const PathEnsemble w = fundamental_transform(K, volterra_paths(K, bm, s.workers), s.workers);
        const double err = (w.values - bm.values).cwiseAbs().maxCoeff();
        o.pass = o.pass && err < 1e-10;
        o.results["round_trip_max_error"] = err;
        o.results["pipeline_covariance"] = probes_json(brownian_covariance_probes(w, nodes), o.pass);
    }
    if (s.source != "pipeline") {
        const PathEnsemble z = cholesky_oracle_paths(spec, grid, s.paths, s.seed, s.workers);
        const PathEnsemble w = fundamental_transform(K, z, s.workers);
        o.results["cholesky_covariance"] = probes_json(brownian_covariance_probes(w, nodes), o.pass);
    }
    return o;
}

// --- girsanov --------------------------------------------------------------

Outcome run_girsanov(const Settings& s) {
    const TimeGrid grid(s.horizon, s.grid);
    const int N = grid.steps();
    const DiscretizedKernel K = discretize_kernel(KernelSpec::fbm(s.hurst, s.horizon), grid);
    const DriftFunctional drift = parse_drift(s.drift);
    Outcome o;

    const std::vector<double> bound(static_cast<std::size_t>(N + 1), drift.growth_bound());
    const NovikovPartition part = novikov_partition(bound, grid.dt(), s.cap);
    o.results["novikov_partition"] = part.indices;

    const std::vector<int> indices = equispaced(N, 5);
    const PathEnsemble z = volterra_paths(K, sample_bm(grid, s.paths, s.seed, s.workers), s.workers);
    const LogWeights lw = girsanov_log_weight(K, drift, z, s.x0, indices, s.workers);
    Json means = Json::array();
    for (const auto& row : weight_mean_check(lw)) {
        o.pass = o.pass && row.pass;
        means.push_back({{"index", row.index}, {"t", grid.node(row.index)}, {"mean", row.mean}, {"stderr", row.stderr_},
                         {"pass", row.pass}});
    }
    o.results["weight_means"] = std::move(means);

    std::vector<double> phi1(static_cast<std::size_t>(z.paths())), phi2(phi1.size());
    for (Eigen::Index p = 0; p < z.values.rows(); ++p) {
        phi1[p] = s.x0 + z.values(p, N);
        phi2[p] = phi1[p] * phi1[p];
    }
    const std::vector<double> log_z = lw.at_index(N);
    const ImportanceEstimate is1 = importance_expectation(phi1, log_z);
    const ImportanceEstimate is2 = importance_expectation(phi2, log_z);

    // Direct simulation with drift on an independent noise stream.
    const PathEnsemble x = euler_with_drift(
        K, drift, volterra_paths(K, sample_bm(grid, s.paths, s.seed, s.workers, StreamTag::brownian, 1), s.workers),
        s.x0, s.workers);
    std::vector<double> e1(phi1.size()), e2(phi1.size());
    for (Eigen::Index p = 0; p < x.values.rows(); ++p) {
        e1[p] = x.values(p, N);
        e2[p] = e1[p] * e1[p];
    }
    const McEstimate d1 = mean_estimate(e1), d2 = mean_estimate(e2);
    auto agree = [](const ImportanceEstimate& a, const McEstimate& b) {
        return std::abs(a.estimate - b.estimate) < 3.0 * std::hypot(a.stderr_, b.stderr_);
    };
    const bool ok1 = agree(is1, d1), ok2 = agree(is2, d2);
    o.pass = o.pass && ok1 && ok2;
    o.results["estimates"] = {
        {"X_T", {{"reweighted", importance_json(is1)}, {"euler", mc_json(d1)}, {"agree", ok1}}},
        {"X_T^2", {{"reweighted", importance_json(is2)}, {"euler", mc_json(d2)}, {"agree", ok2}}},
    };
    o.results["ess"] = is1.ess;
    return o;
}

// --- mrf-test --------------------------------------------------------------

Outcome run_mrf_test(const Settings& s) {
    const Graph g = parse_graph_spec(s.graph).materialize();
    const VertexSet A = parse_vertex_set(s.set_a), B = parse_vertex_set(s.set_b);
    const VertexSet S = s.set_s.empty() ? boundary2(g, A) : parse_vertex_set(s.set_s);
    require(s.reps >= 1, "mrf-test: --reps must be positive");
    require(s.sampler == "euler" || s.sampler == "reweighted", "mrf-test: --sampler must be euler or reweighted");
    const InteractingSystem sys = make_system(s, g);
    KernelCache cache(sys.grid);
    CITestOptions opt;
    opt.perms = s.perms;
    opt.workers = s.workers;

    Outcome o;
    Json reps = Json::array();
    int rejections = 0;
    for (int r = 0; r < s.reps; ++r) {
        const std::uint64_t seed = derive_stream_seed(s.seed, StreamTag::system_noise, {0xC1ULL, static_cast<std::uint64_t>(r)});
        opt.seed = seed;
        CITestReport rep;
        if (s.sampler == "euler") {
            rep = conditional_independence_test(simulate_system_euler(sys, cache, s.paths, seed, s.workers, true), {}, A, B,
                                                S, opt);
        } else {
            const SystemEnsemble free = simulate_system_euler(sys, cache, s.paths, seed, s.workers, false);
            const SystemLogWeights lw = system_log_weights(sys, cache, free, s.grid, s.workers);
            rep = conditional_independence_test(free, lw.total, A, B, S, opt);
        }
        if (rep.p_value <= s.level) ++rejections;
        reps.push_back({{"statistic", rep.statistic},
                        {"p_value", rep.p_value},
                        {"ess", rep.ess},
                        {"separator_features", rep.separator_features}});
    }
    const double rate = static_cast<double>(rejections) / s.reps;
    const double limit = s.reps == 1 ? s.level : s.level + 3.0 * std::sqrt(s.level * (1.0 - s.level) / s.reps);
    o.pass = s.reps == 1 ? rejections == 0 : rate <= limit;
    o.results["A"] = vertex_set_json(A);
    o.results["B"] = vertex_set_json(B);
    o.results["S"] = vertex_set_json(S);
    o.results["repetitions"] = std::move(reps);
    o.results["rejection_rate"] = rate;
    o.results["rejection_limit"] = limit;
    return o;
}

// --- truncate-sweep --------------------------------------------------------

Outcome run_truncate_sweep(const Settings& s) {
    const GraphGenerator gen = parse_graph_spec(s.graph);
    const VertexSet A = parse_vertex_set(s.set_a);
    require(!A.empty(), "truncate-sweep: --set-a must be nonempty");
    const double clip = s.clip;
    const PathFunctional psi = [A, clip](const SystemEnsemble& e, std::int64_t p) {
        double acc = 0.0;
        for (Vertex a : A) acc += e.state(a).values(p, e.grid.steps());
        return std::clamp(acc / static_cast<double>(A.size()), -clip, clip);
    };
    const TruncationSweep sweep =
        truncation_convergence(gen, uniform_drift(parse_drift(s.drift)), s.hurst, A, psi, s.n_list,
                               TimeGrid(s.horizon, s.grid), s.paths, s.seed, {s.x0, s.x0_sd}, s.workers);
    std::ostringstream csv;
    CsvWriter w(csv);
    w.header({"n", "estimate", "stderr", "diff", "diff_stderr"});
    Json rows = Json::array();
    for (const auto& r : sweep.rows) {
        w.row(r.n, {r.estimate.estimate, r.estimate.stderr_, r.diff_from_previous, r.diff_stderr});
        rows.push_back({{"n", r.n}, {"estimate", mc_json(r.estimate)}, {"diff", r.diff_from_previous}, {"diff_stderr", r.diff_stderr}});
    }
    if (!s.csv.empty()) write_output(s.csv, csv.str());
    Outcome o;
    o.results["rows"] = std::move(rows);
    o.results["shrinks"] = sweep.shrinks;
    o.pass = sweep.rows.size() < 3 || sweep.shrinks;
    return o;
}

// --- entropy-check ---------------------------------------------------------

Outcome run_entropy_check(const Settings& s) {
    const Graph g = parse_graph_spec(s.graph).materialize();
    const InteractingSystem sys = make_system(s, g);
    KernelCache cache(sys.grid);
    const SystemEnsemble free = simulate_system_euler(sys, cache, s.paths, s.seed, s.workers, false);
    const SystemLogWeights lw = system_log_weights(sys, cache, free, s.grid, s.workers);
    Outcome o;
    Json arr = Json::array();
    for (const std::string& text : s.sets) {
        const EntropyReport e = entropy_estimate(sys, cache, free, lw, parse_vertex_set(text));
        o.pass = o.pass && e.pass;
        arr.push_back({{"A", vertex_set_json(e.A)},
                       {"relevant", vertex_set_json(e.relevant)},
                       {"entropy", mc_json(e.estimate)},
                       {"reverse_entropy", mc_json(e.reverse_estimate)},
                       {"bound", e.bound},
                       {"c_t", e.c_t},
                       {"unit_energy", e.unit_energy},
                       {"max_growth", e.max_growth},
                       {"sup_second_moment", e.sup_second_moment},
                       {"max_degree", e.max_degree},
                       {"pass", e.pass}});
    }
    o.results["sets"] = std::move(arr);
    return o;
}

// --- selftest --------------------------------------------------------------

Outcome run_selftest_command(const Settings& s) {
    SelftestOptions opt;
    opt.seed = s.seed;
    opt.workers = s.workers;
    opt.quick = s.quick;
    opt.only = s.only;
    const SelftestReport report = run_selftest(opt);
    const std::string results = results_json(report);
    if (!s.results_out.empty()) write_output(s.results_out, results + "\n");
    for (const auto& c : report.criteria)
        std::cerr << "criterion " << c.id << " [" << (c.pass ? "PASS" : "FAIL") << "] " << c.title << "\n";
    Outcome o;
    o.results = Json::parse(results);
    o.pass = report.pass();
    o.timing = Json::parse(timing_json(report));
    return o;
}

// --- option helpers --------------------------------------------------------

template <class T>
CLI::Option* bind_option(CLI::App* c, Settings& s, const std::string& flag, T& field, const std::string& help) {
    s.fields.emplace_back(flag.substr(2), [&field] { return Json(field); });
    return c->add_option(flag, field, help);
}

CLI::Option* bind_flag(CLI::App* c, Settings& s, const std::string& flag, bool& field, const std::string& help) {
    s.fields.emplace_back(flag.substr(2), [&field] { return Json(field); });
    return c->add_flag(flag, field, help);
}

void add_hurst(CLI::App* c, Settings& s) {
    bind_option(c, s, "--hurst", s.hurst, "Hurst parameter H in (0, 1)")->check(CLI::Range(0.0, 1.0));
}
void add_grid(CLI::App* c, Settings& s) {
    bind_option(c, s, "--grid", s.grid, "number of grid steps N")->check(CLI::Range(1, kMaxGridSteps));
    bind_option(c, s, "--horizon", s.horizon, "time horizon T")->check(CLI::PositiveNumber);
}
void add_mc(CLI::App* c, Settings& s) {
    bind_option(c, s, "--paths", s.paths, "number of Monte Carlo paths")->check(CLI::PositiveNumber);
    bind_option(c, s, "--seed", s.seed, "random seed");
    bind_option(c, s, "--workers", s.workers, "worker threads (0 = all cores); output does not depend on it");
}
void add_initial(CLI::App* c, Settings& s) {
    bind_option(c, s, "--x0", s.x0, "initial value (mean of the initial law)");
    bind_option(c, s, "--x0-sd", s.x0_sd, "standard deviation of the initial law")->check(CLI::NonNegativeNumber);
}
void add_report(CLI::App* c, Settings& s, const std::string& help) {
    bind_option(c, s, "--out", s.out, help);
    c->add_option("--config", s.config, "JSON file with option values; command-line flags take precedence");
}

}  // namespace

CommandSet::CommandSet(CLI::App& app) {
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    auto add = [&](const std::string& name, const std::string& help, bool csv_defaults_to_stdout,
                   const std::function<void(CLI::App*, Settings&)>& setup, Outcome (*body)(const Settings&)) {
        auto s = std::make_shared<Settings>();
        CLI::App* c = app.add_subcommand(name, help);
        setup(c, *s);
        commands_.push_back({c, [s, body] { return body(*s); }, s.get(), csv_defaults_to_stdout});
    };

    add("kernel-table", "tabulate K, L and R on grid nodes (CSV)", true,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            s.grid = 16;
            add_grid(c, s);
            bind_option(c, s, "--csv", s.csv, "CSV output (default stdout)");
            add_report(c, s, "JSON report path");
        },
        run_kernel_table);

    add("weights", "fundamental weights 1^T R_n^{-1} of discrete fBm (CSV)", true,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            bind_option(c, s, "--n", s.n, "number of increments")->check(CLI::PositiveNumber);
            bind_option(c, s, "--scale", s.scale, "grid spacing (default 1/n)")->check(CLI::NonNegativeNumber);
            bind_option(c, s, "--csv", s.csv, "CSV output (default stdout)");
            add_report(c, s, "JSON report path");
        },
        run_weights);

    add("simulate", "simulate fBm (optionally with drift) paths", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            add_grid(c, s);
            add_mc(c, s);
            add_initial(c, s);
            bind_option(c, s, "--drift", s.drift, "drift spec: zero, const:a, linear:a:b, tanh:a:scale");
            bind_option(c, s, "--method", s.method, "volterra (discretized kernel) or cholesky (exact covariance)");
            bind_option(c, s, "--ensemble-out", s.ensemble_out, "binary ensemble file");
            bind_option(c, s, "--csv", s.csv, "CSV file with one row per path");
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_simulate);

    add("transform-check", "check the fundamental transform Z -> W*", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            add_grid(c, s);
            add_mc(c, s);
            bind_option(c, s, "--source", s.source, "pipeline, cholesky or both");
            bind_option(c, s, "--in", s.input, "transform a stored Volterra-path ensemble instead");
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_transform_check);

    add("girsanov", "Girsanov weights, weight means and reweighted estimates", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            s.grid = 64;
            add_grid(c, s);
            add_mc(c, s);
            add_initial(c, s);
            s.drift = "const:0.5";
            bind_option(c, s, "--drift", s.drift, "drift spec: const:a, linear:a:b, tanh:a:scale");
            bind_option(c, s, "--cap", s.cap, "Novikov segment cap")->check(CLI::PositiveNumber);
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_girsanov);

    add("mrf-test", "conditional-independence test of the 2-MRF property", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            s.grid = 8;
            add_grid(c, s);
            s.paths = 1000;
            add_mc(c, s);
            add_initial(c, s);
            s.drift = "neighbor:0:-0.5:0.8";
            bind_option(c, s, "--drift", s.drift, "drift spec applied at every vertex");
            bind_option(c, s, "--graph", s.graph, "path:k, cycle:k, tree:b:d or file:<edge list>");
            bind_option(c, s, "--set-a", s.set_a, "vertex set A, e.g. 0 or 0,1");
            bind_option(c, s, "--set-b", s.set_b, "vertex set B");
            bind_option(c, s, "--set-s", s.set_s, "separator S (default: second boundary of A)");
            bind_option(c, s, "--perms", s.perms, "permutations per test")->check(CLI::PositiveNumber);
            bind_option(c, s, "--reps", s.reps, "independent repetitions")->check(CLI::PositiveNumber);
            bind_option(c, s, "--level", s.level, "test level")->check(CLI::Range(0.0, 1.0));
            bind_option(c, s, "--sampler", s.sampler, "euler (drifted ensemble) or reweighted (driftless + weights)");
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_mrf_test);

    add("truncate-sweep", "estimates on truncated graphs G_n for a list of n", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            s.grid = 16;
            add_grid(c, s);
            add_mc(c, s);
            s.x0 = 1.0;
            add_initial(c, s);
            s.graph = "zline";
            s.drift = "neighbor:0.3:-0.5:0.4";
            bind_option(c, s, "--graph", s.graph, "zline, path:k, cycle:k, tree:b:d or file:<edge list>");
            bind_option(c, s, "--drift", s.drift, "drift spec applied at every vertex");
            bind_option(c, s, "--set-a", s.set_a, "vertex set A (inside V_{min n - 3})");
            bind_option(c, s, "--n-list", s.n_list, "truncation levels, each >= 4")->delimiter(',');
            bind_option(c, s, "--clip", s.clip, "psi = mean of X^A_T clipped to [-clip, clip]")->check(CLI::PositiveNumber);
            bind_option(c, s, "--csv", s.csv, "CSV table of the sweep");
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_truncate_sweep);

    add("entropy-check", "relative entropy estimates against the linear bound", false,
        [](CLI::App* c, Settings& s) {
            add_hurst(c, s);
            s.grid = 16;
            add_grid(c, s);
            add_mc(c, s);
            add_initial(c, s);
            s.drift = "neighbor:0.2:-0.5:0.4";
            s.sets = {"2", "2,3", "1,2,3"};
            bind_option(c, s, "--graph", s.graph, "path:k, cycle:k, tree:b:d or file:<edge list>");
            bind_option(c, s, "--drift", s.drift, "drift spec applied at every vertex");
            bind_option(c, s, "--set-a", s.sets, "vertex set A; repeat for several sets")
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_entropy_check);

    add("selftest", "run the acceptance suite", false,
        [](CLI::App* c, Settings& s) {
            s.seed = SelftestOptions{}.seed;
            bind_option(c, s, "--seed", s.seed, "suite seed");
            bind_option(c, s, "--workers", s.workers, "worker threads; results do not depend on it");
            bind_flag(c, s, "--quick", s.quick, "smaller path counts");
            bind_option(c, s, "--only", s.only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
            bind_option(c, s, "--results-out", s.results_out, "results-only JSON (byte-identical across runs)");
            add_report(c, s, "JSON report path (default stdout)");
        },
        run_selftest_command);
}

int CommandSet::run() const {
    for (const Command& c : commands_) {
        if (!c.app->parsed()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome = c.body();
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        Json report;
        report["command"] = c.app->get_name();
        report["version"] = VMRF_VERSION;
        report["config"] = c.settings->config_json();
        if (report["config"].contains("seed")) report["seed"] = report["config"]["seed"];
        report["results"] = std::move(outcome.results);
        report["pass"] = outcome.pass;
        Json timing = std::move(outcome.timing);
        timing["wall_seconds"] = seconds;
        report["timing"] = std::move(timing);
        // The JSON report goes to --out; it falls back to stdout unless a CSV table is already there.
        const std::string& csv = c.settings->csv;
        const bool csv_on_stdout = csv == "-" || (csv.empty() && c.csv_defaults_to_stdout);
        if (!c.settings->out.empty() || !csv_on_stdout) write_output(c.settings->out, report.dump(2) + "\n");
        return outcome.pass ? exit_pass : exit_statistical;
    }
    return exit_usage;
}

}  // namespace vmrf::cli
