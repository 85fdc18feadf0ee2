#include <benchmark/benchmark.h>

#include "monas/engine.hpp"
#include "monas/proxies.hpp"
#include "monas/skeleton.hpp"

namespace {

using namespace monas;

const MacroSkeleton kSkeleton; // stem 16, 3 stacks x 1 cell, 3x8x8 input

NetworkSpec desk_network() {
    return instantiate_network(
        kSkeleton,
        parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                       "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|"));
}

NetworkSpec desk_supernet() {
    return instantiate_network(
        kSkeleton, SupernetMask::full(CellTopology::fully_connected(4), all_operators()));
}

void BM_forward_single_path(benchmark::State& state) {
    const NetworkSpec spec = desk_network();
    const ParamVector params = init_params(spec, 1);
    const Tensor x = normal_input_batch(spec.input_shape, 1, 2)[0];
    for (auto _ : state) benchmark::DoNotOptimize(forward(spec, params, x));
}
BENCHMARK(BM_forward_single_path);

void BM_forward_supernet(benchmark::State& state) {
    const NetworkSpec spec = desk_supernet();
    const ParamVector params = init_params(spec, 1);
    const Tensor x = normal_input_batch(spec.input_shape, 1, 2)[0];
    for (auto _ : state) benchmark::DoNotOptimize(forward(spec, params, x));
}
BENCHMARK(BM_forward_supernet);

void BM_param_gradient_supernet(benchmark::State& state) {
    const NetworkSpec spec = desk_supernet();
    const ParamVector params = init_params(spec, 1);
    const Tensor x = normal_input_batch(spec.input_shape, 1, 2)[0];
    for (auto _ : state) benchmark::DoNotOptimize(param_gradient(spec, params, x));
}
BENCHMARK(BM_param_gradient_supernet);

void BM_instantiate_network(benchmark::State& state) {
    const CellGenotype g =
        parse_genotype("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|+"
                       "|avg_pool_3x3~0|none~1|nor_conv_3x3~2|");
    for (auto _ : state) benchmark::DoNotOptimize(instantiate_network(kSkeleton, g));
}
BENCHMARK(BM_instantiate_network);

void BM_init_params(benchmark::State& state) {
    const NetworkSpec spec = desk_network();
    for (auto _ : state) benchmark::DoNotOptimize(init_params(spec, 1));
}
BENCHMARK(BM_init_params);

} // namespace
