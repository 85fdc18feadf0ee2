#include <benchmark/benchmark.h>

#include "monas/analysis.hpp"
#include "monas/jacobi.hpp"
#include "monas/proxies.hpp"
#include "monas/rng.hpp"
#include "monas/skeleton.hpp"

namespace {

using namespace monas;

void BM_ntk_condition_number(benchmark::State& state) {
    const MacroSkeleton skel{8, 3, 1, 10, {3, 8, 8}};
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                             "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|"));
    const int n = static_cast<int>(state.range(0));
    const auto batch = normal_input_batch(spec.input_shape, n, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(ntk_condition_number(spec, {7}, batch, 2));
}
BENCHMARK(BM_ntk_condition_number)->Arg(8)->Arg(16);

void BM_linear_region_count(benchmark::State& state) {
    const MacroSkeleton skel{8, 3, 1, 10, {3, 8, 8}};
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                             "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|"));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            linear_region_count(spec, {7}, static_cast<int>(state.range(0)), 5));
}
BENCHMARK(BM_linear_region_count)->Arg(32)->Arg(128);

void BM_flops_estimate(benchmark::State& state) {
    const MacroSkeleton skel;
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                             "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|"));
    for (auto _ : state) benchmark::DoNotOptimize(flops_estimate(spec));
}
BENCHMARK(BM_flops_estimate);

void BM_latency_estimate(benchmark::State& state) {
    const MacroSkeleton skel;
    const LatencyTable table = make_synthetic_table(skel, all_operators(), 1);
    const CellGenotype g =
        parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                       "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|");
    for (auto _ : state) benchmark::DoNotOptimize(latency_estimate(g, table, skel));
}
BENCHMARK(BM_latency_estimate);

void BM_jacobi_eigenvalues(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(11);
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            const double v = rng.next_normal();
            a[static_cast<std::size_t>(r) * n + c] = v;
            a[static_cast<std::size_t>(c) * n + r] = v;
        }
    for (auto _ : state) {
        auto copy = a;
        benchmark::DoNotOptimize(symmetric_eigenvalues(std::move(copy), n));
    }
}
BENCHMARK(BM_jacobi_eigenvalues)->Arg(16)->Arg(32)->Arg(64);

void BM_kendall_tau(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(13);
    std::vector<double> a(n), b(n);
    for (double& v : a) v = rng.next_normal();
    for (double& v : b) v = rng.next_normal();
    for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(a, b));
}
BENCHMARK(BM_kendall_tau)->Arg(100)->Arg(1000);

void BM_enumerate_full_space(benchmark::State& state) {
    const CellTopology t4 = CellTopology::fully_connected(4);
    for (auto _ : state) {
        GenotypeEnumerator en(t4, all_operators());
        std::size_t count = 0;
        while (auto g = en.next()) ++count;
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_enumerate_full_space);

} // namespace
