#include <benchmark/benchmark.h>

#include "vmrf/girsanov.hpp"
#include "vmrf/path_engine.hpp"

namespace {

struct Fixture {
    vmrf::TimeGrid grid{1.0, 64};
    vmrf::DiscretizedKernel kernel = vmrf::discretize_kernel(vmrf::KernelSpec::fbm(0.3), grid);
    vmrf::PathEnsemble bm = vmrf::sample_bm(grid, 10000, 1, 1);
    vmrf::PathEnsemble z = vmrf::volterra_paths(kernel, bm, 1);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void bm_sample_bm(benchmark::State& state) {
    const vmrf::TimeGrid grid(1.0, 64);
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::sample_bm(grid, 10000, 1, 1));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_sample_bm)->Unit(benchmark::kMillisecond);

void bm_volterra_paths(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::volterra_paths(f.kernel, f.bm, 1));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_volterra_paths)->Unit(benchmark::kMillisecond);

void bm_fundamental_transform(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::fundamental_transform(f.kernel, f.z, 1));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_fundamental_transform)->Unit(benchmark::kMillisecond);

void bm_girsanov_log_weight(benchmark::State& state) {
    const Fixture& f = fixture();
    const auto drift = vmrf::DriftFunctional::bounded_tanh(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::girsanov_log_weight(f.kernel, drift, f.z, 0.0, {64}, 1));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_girsanov_log_weight)->Unit(benchmark::kMillisecond);

void bm_euler_with_drift(benchmark::State& state) {
    const Fixture& f = fixture();
    const auto drift = vmrf::DriftFunctional::bounded_tanh(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::euler_with_drift(f.kernel, drift, f.z, 0.0, 1));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(bm_euler_with_drift)->Unit(benchmark::kMillisecond);

}  // namespace
