#include <benchmark/benchmark.h>

#include "vmrf/discrete_fundamental.hpp"
#include "vmrf/path_engine.hpp"
#include "vmrf/volterra_kernels.hpp"

namespace {

void bm_kernel_K(benchmark::State& state) {
    const vmrf::KernelSpec spec = vmrf::KernelSpec::fbm(state.range(0) / 10.0);
    double s = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vmrf::kernel_K(spec, 0.9, s));
        s = s < 0.8 ? s + 0.011 : 0.013;
    }
}
BENCHMARK(bm_kernel_K)->Arg(3)->Arg(7);

void bm_kernel_L(benchmark::State& state) {
    const vmrf::KernelSpec spec = vmrf::KernelSpec::fbm(state.range(0) / 10.0);
    double s = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vmrf::kernel_L(spec, 0.9, s));
        s = s < 0.8 ? s + 0.011 : 0.013;
    }
}
BENCHMARK(bm_kernel_L)->Arg(3)->Arg(7);

void bm_discretize_kernel(benchmark::State& state) {
    const vmrf::TimeGrid grid(1.0, static_cast<int>(state.range(0)));
    const vmrf::KernelSpec spec = vmrf::KernelSpec::fbm(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::discretize_kernel(spec, grid));
}
BENCHMARK(bm_discretize_kernel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void bm_recursive_inverse(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const vmrf::HurstParam H(0.3);
    const auto cov = vmrf::build_covariance(H, n, 1.0 / n);
    for (auto _ : state) benchmark::DoNotOptimize(vmrf::recursive_inverse(cov.matrix));
}
BENCHMARK(bm_recursive_inverse)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
