#include <doctest.h>

#include <cmath>

#include "monas/jacobi.hpp"
#include "monas/proxies.hpp"
#include "monas/rng.hpp"

using namespace monas;

namespace {

CellGenotype random_genotype(const CellTopology& topo, Rng& rng) {
    const auto& ops = all_operators();
    CellGenotype g;
    g.topology = topo;
    for (int e = 0; e < topo.num_edges(); ++e)
        g.choice_per_edge.push_back(ops[rng.next_u64() % ops.size()]);
    return g;
}

// ---------------------------------------------------------------------
// first-principles FLOPs oracle: hand formulas over the skeleton and the
// genotype's cell structure, no NetworkSpec traversal
// ---------------------------------------------------------------------

std::int64_t oracle_op_flops(OperatorKind op, const FeatureShape& s) {
    const std::int64_t chw = s.numel();
    const std::int64_t c = s.c;
    switch (op) {
    case OperatorKind::Conv3x3:
        return 2 * 9 * c * chw + 2 * chw; // conv + bn
    case OperatorKind::Conv1x1:
        return 2 * c * chw + 2 * chw;
    case OperatorKind::AvgPool3x3:
        return 9 * chw;
    case OperatorKind::Zero:
    case OperatorKind::SkipConnect:
        return 0;
    }
    return 0;
}

std::int64_t oracle_cell_flops(const CellGenotype& g, const FeatureShape& s) {
    std::int64_t total = 0;
    std::vector<int> live_in(static_cast<std::size_t>(g.topology.num_nodes), 0);
    for (int e = 0; e < g.topology.num_edges(); ++e) {
        const OperatorKind op = g.choice_per_edge[static_cast<std::size_t>(e)];
        total += oracle_op_flops(op, s);
        if (op != OperatorKind::Zero)
            ++live_in[static_cast<std::size_t>(g.topology.edges[static_cast<std::size_t>(e)].second)];
    }
    for (int node = 1; node < g.topology.num_nodes; ++node)
        if (live_in[static_cast<std::size_t>(node)] >= 2)
            total += (live_in[static_cast<std::size_t>(node)] - 1) * s.numel();
    return total;
}

std::int64_t oracle_network_flops(const MacroSkeleton& skel, const CellGenotype& g) {
    std::int64_t total = 0;
    // stem
    const FeatureShape in = skel.input_shape;
    total += 2LL * 9 * in.c * skel.stem_channels * in.h * in.w;
    total += 2LL * skel.stem_channels * in.h * in.w;
    // stacks and reductions
    for (int stage = 0; stage < skel.num_stacks; ++stage) {
        const FeatureShape s = stage_shape(skel, stage);
        total += skel.cells_per_stack * oracle_cell_flops(g, s);
        if (stage + 1 < skel.num_stacks) {
            const FeatureShape r = stage_shape(skel, stage + 1);
            const std::int64_t rhw = static_cast<std::int64_t>(r.h) * r.w;
            total += 2LL * 9 * s.c * r.c * rhw + 2LL * r.c * rhw; // conv_a + bn_a
            total += 2LL * 9 * r.c * r.c * rhw + 2LL * r.c * rhw; // conv_b + bn_b
            total += 2LL * s.c * r.c * rhw;                       // 1x1 shortcut
            total += r.c * rhw;                                   // residual add
        }
    }
    const FeatureShape last = stage_shape(skel, skel.num_stacks - 1);
    total += last.numel();                           // global average pool
    total += 2LL * last.c * skel.num_classes;        // classifier
    return total;
}

} // namespace

TEST_CASE("ntk: isotropic gram gives K_i = 1 for every index") {
    std::vector<double> gram(16, 0.0);
    for (int i = 0; i < 4; ++i) gram[static_cast<std::size_t>(i * 4 + i)] = 2.5;
    const NtkSpectrum s = ntk_spectrum_from_gram(gram, 4);
    for (int i = 0; i < 4; ++i) CHECK(ntk_condition_from_spectrum(s, i) == 1.0);
}

TEST_CASE("ntk: batch of 3 with i = 2 is identically 1") {
    MacroSkeleton skel{4, 2, 1, 3, {2, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_3x3~0|+|skip_connect~0|avg_pool_3x3~1|"));
    const auto batch = normal_input_batch({2, 4, 4}, 3, 17);
    CHECK(ntk_condition_number(spec, {5}, batch, 2) == 1.0);
}

TEST_CASE("ntk: duplicated input forces an infinite K_0") {
    MacroSkeleton skel{4, 2, 1, 3, {2, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_1x1~0|+|nor_conv_3x3~0|skip_connect~1|"));
    auto batch = normal_input_batch({2, 4, 4}, 3, 23);
    batch[1] = batch[0]; // identical gradient rows, rank-deficient gram
    CHECK(std::isinf(ntk_condition_number(spec, {5}, batch, 0)));
}

TEST_CASE("ntk: preconditions") {
    MacroSkeleton skel{4, 2, 1, 3, {2, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|nor_conv_1x1~0|+|none~0|skip_connect~1|"));
    const auto batch = normal_input_batch({2, 4, 4}, 2, 3);
    CHECK_THROWS_AS(ntk_condition_number(spec, {1}, batch, 2), ConfigError); // n < i+1
    CHECK_THROWS_AS(ntk_condition_number(spec, {}, batch, 0), ConfigError);
}

TEST_CASE("ntk: K_i is exactly invariant under uniform jacobian scaling") {
    Rng rng(31);
    const int n = 6, p = 50;
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    for (auto& row : rows)
        for (double& v : row) v = rng.next_normal();

    auto gram_of = [&](double scale) {
        std::vector<double> gram(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int k = 0; k < p; ++k)
                    acc += (scale * rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]) *
                           (scale * rows[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)]);
                gram[static_cast<std::size_t>(a) * n + b] = acc;
            }
        return gram;
    };

    const NtkSpectrum base = ntk_spectrum_from_gram(gram_of(1.0), n);
    const NtkSpectrum doubled = ntk_spectrum_from_gram(gram_of(2.0), n);
    for (int i = 0; i < n; ++i) {
        // s = 2 scales every eigenvalue by exactly 4, so the ratio is bitwise equal
        CHECK(ntk_condition_from_spectrum(doubled, i) == ntk_condition_from_spectrum(base, i));
    }
}

TEST_CASE("lr: network without ReLU units has exactly one region") {
    MacroSkeleton skel{4, 1, 1, 3, {2, 4, 4}}; // single stack: no reduction ReLUs
    const NetworkSpec spec = instantiate_network(
        skel, parse_genotype("|none~0|+|none~0|none~1|+|none~0|none~1|none~2|"));
    CHECK(spec.relu_units == 0);
    CHECK(linear_region_count(spec, {1, 2, 3}, 64, 9) == 1.0);
}

TEST_CASE("lr: count never exceeds the sample count") {
    MacroSkeleton skel{4, 2, 1, 3, {2, 4, 4}};
    Rng rng(8);
    const CellTopology t3 = CellTopology::fully_connected(3);
    for (int trial = 0; trial < 5; ++trial) {
        const NetworkSpec spec = instantiate_network(skel, random_genotype(t3, rng));
        const double r = linear_region_count(spec, {7}, 16, 11);
        CHECK(r >= 1.0);
        CHECK(r <= 16.0);
    }
}

TEST_CASE("lr: scalar relu splits the line into two observed regions") {
    std::vector<LayerSpec> layers(2);
    layers[0].kind = LayerKind::Input;
    layers[1].kind = LayerKind::ReLU;
    layers[1].inputs = {0};
    const NetworkSpec spec = finalize_network(layers, {1, 1, 1}, 1);
    const ParamVector params = init_params(spec, 1);
    REQUIRE(params.empty());

    // the two sign patterns, exhibited directly
    const ForwardResult neg = forward(spec, params, Tensor({1, 1, 1}, {-1.0}));
    const ForwardResult pos = forward(spec, params, Tensor({1, 1, 1}, {1.0}));
    CHECK(neg.pattern.get(0) == false);
    CHECK(pos.pattern.get(0) == true);
    CHECK(!(neg.pattern == pos.pattern));

    // a normal sample hits both signs with overwhelming probability
    CHECK(linear_region_count(spec, {1}, 64, 13) == 2.0);
}

TEST_CASE("flops: conv3x3 16->16 at 32x32 output") {
    std::vector<LayerSpec> layers(2);
    layers[0].kind = LayerKind::Input;
    layers[1].kind = LayerKind::Conv;
    layers[1].inputs = {0};
    layers[1].kernel = 3;
    layers[1].stride = 1;
    layers[1].pad = 1;
    layers[1].c_in = 16;
    layers[1].c_out = 16;
    const NetworkSpec spec = finalize_network(layers, {16, 32, 32}, 16 * 32 * 32);
    CHECK(flops_estimate(spec) == 4718592); // 2*9*16*16*32*32
}

TEST_CASE("flops: zero cells cost nothing beyond the skeleton") {
    MacroSkeleton skel;
    const CellGenotype zero = parse_genotype("|none~0|+|none~0|none~1|+|none~0|none~1|none~2|");
    CHECK(flops_estimate(instantiate_network(skel, zero)) ==
          oracle_network_flops(skel, zero));
}

TEST_CASE("flops: genotype estimate matches the first-principles oracle") {
    MacroSkeleton skel;
    Rng rng(77);
    const CellTopology t4 = CellTopology::fully_connected(4);
    for (int trial = 0; trial < 20; ++trial) {
        const CellGenotype g = random_genotype(t4, rng);
        CHECK(flops_estimate(instantiate_network(skel, g)) == oracle_network_flops(skel, g));
    }
}

TEST_CASE("latency: independent hand sum over a 2-edge cell") {
    // 3 stacks x 1 cell, entries 1.5 ms and 2.5 ms per stage, overhead 4 ms
    MacroSkeleton skel;
    CellGenotype g;
    g.topology = CellTopology::from_edges(3, {{0, 1}, {1, 2}});
    g.choice_per_edge = {OperatorKind::Conv1x1, OperatorKind::AvgPool3x3};

    LatencyTable table;
    table.const_overhead_us = 4000.0;
    for (int stage = 0; stage < 3; ++stage) {
        const FeatureShape s = stage_shape(skel, stage);
        table.entries[{"nor_conv_1x1", stage, s.c, s.c, s.h, s.w}] = 1500.0;
        table.entries[{"avg_pool_3x3", stage, s.c, s.c, s.h, s.w}] = 2500.0;
    }
    CHECK(latency_estimate(g, table, skel) == 16.0); // 3*(1.5+2.5) + 4.0
}

TEST_CASE("latency: all-Zero genotype costs exactly the constant overhead") {
    MacroSkeleton skel;
    LatencyTable table;
    table.const_overhead_us = 1234.5;
    const CellGenotype zero = parse_genotype("|none~0|+|none~0|none~1|+|none~0|none~1|none~2|");
    CHECK(latency_estimate(zero, table, skel) == 1.2345);
}

TEST_CASE("latency: uncovered operator raises MissingEntry") {
    MacroSkeleton skel;
    LatencyTable table = make_synthetic_table(skel, all_operators(), 3);
    REQUIRE(table.entries.erase({"avg_pool_3x3", 2, 64, 64, 2, 2}) == 1);
    const CellGenotype g = parse_genotype("|none~0|+|none~0|none~1|+|none~0|none~1|avg_pool_3x3~2|");
    CHECK_THROWS_AS(latency_estimate(g, table, skel), MissingEntryError);
}

TEST_CASE("monotonicity: pruning an operator never increases F or L") {
    MacroSkeleton skel{8, 3, 1, 10, {3, 8, 8}};
    const LatencyTable table = make_synthetic_table(skel, all_operators(), 12);
    Rng rng(55);
    const CellTopology t3 = CellTopology::fully_connected(3);

    for (int trial = 0; trial < 30; ++trial) {
        SupernetMask mask = SupernetMask::full(t3, all_operators());
        // random partial pruning, keeping >= 2 alive on edge 0
        for (int e = 0; e < 3; ++e)
            for (int j = 0; j < 5; ++j)
                if (e > 0 && rng.next_u64() % 3 == 0 && mask.alive_count(e) > 1)
                    mask.alive[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] = false;

        const int edge = 0;
        std::vector<int> alive;
        for (int j = 0; j < 5; ++j)
            if (mask.alive[0][static_cast<std::size_t>(j)]) alive.push_back(j);
        const int victim = alive[static_cast<std::size_t>(rng.next_u64() % alive.size())];

        SupernetMask pruned = mask;
        pruned.alive[static_cast<std::size_t>(edge)][static_cast<std::size_t>(victim)] = false;

        CHECK(flops_estimate(instantiate_network(skel, mask)) >=
              flops_estimate(instantiate_network(skel, pruned)));
        CHECK(latency_estimate(mask, table, skel) >= latency_estimate(pruned, table, skel));
    }
}

TEST_CASE("ntk: gram matrices of real networks stay PSD up to tolerance") {
    MacroSkeleton skel{3, 2, 1, 3, {2, 4, 4}};
    Rng rng(64);
    const CellTopology t3 = CellTopology::fully_connected(3);
    for (int trial = 0; trial < 5; ++trial) {
        const NetworkSpec spec = instantiate_network(skel, random_genotype(t3, rng));
        const ParamVector params = init_params(spec, 900 + static_cast<std::uint64_t>(trial));
        const auto batch = normal_input_batch({2, 4, 4}, 6, 70 + static_cast<std::uint64_t>(trial));
        const auto ev = symmetric_eigenvalues(ntk_gram(spec, params, batch), 6);
        CHECK(ev.back() >= -1e-6 * std::max(ev.front(), 0.0));
    }
}
