#include <doctest.h>

#include <cmath>

#include "monas/engine.hpp"
#include "monas/proxies.hpp"
#include "monas/rng.hpp"
#include "monas/skeleton.hpp"

using namespace monas;

namespace {

NetworkSpec tiny_linear_net() {
    // Input(3) -> Linear(3 -> 1)
    std::vector<LayerSpec> layers(2);
    layers[0].kind = LayerKind::Input;
    layers[1].kind = LayerKind::Linear;
    layers[1].inputs = {0};
    layers[1].in_features = 3;
    layers[1].out_features = 1;
    return finalize_network(layers, {3, 1, 1}, 1);
}

CellGenotype genotype_from(const std::string& s) { return parse_genotype(s); }

/// Central finite differences of g(x) = sum of logits w.r.t. params.
std::vector<double> fd_gradient(const NetworkSpec& spec, ParamVector params, const Tensor& x,
                                double h) {
    auto eval = [&](const ParamVector& p) {
        const Tensor logits = forward(spec, p, x).logits;
        double s = 0.0;
        for (double v : logits.data) s += v;
        return s;
    };
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double fp = eval(params);
        params[i] = saved - h;
        const double fm = eval(params);
        params[i] = saved;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& fd) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double rel = std::fabs(analytic[i] - fd[i]) / (std::fabs(analytic[i]) + 1e-12);
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace

TEST_CASE("init: identical seeds give bitwise-identical parameters") {
    MacroSkeleton skel{4, 2, 1, 3, {1, 4, 4}};
    const NetworkSpec spec =
        instantiate_network(skel, genotype_from("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|"));
    CHECK(init_params(spec, 7) == init_params(spec, 7));
    CHECK(init_params(spec, 7) != init_params(spec, 8));
}

TEST_CASE("init: batch norm starts as the identity affine") {
    MacroSkeleton skel{4, 2, 1, 3, {1, 4, 4}};
    const NetworkSpec spec =
        instantiate_network(skel, genotype_from("|nor_conv_3x3~0|+|nor_conv_1x1~0|skip_connect~1|"));
    const ParamVector params = init_params(spec, 3);
    for (const LayerSpec& l : spec.layers) {
        if (l.kind != LayerKind::BatchNorm) continue;
        for (int c = 0; c < l.out_shape.c; ++c) {
            CHECK(params[static_cast<std::size_t>(l.param_offset + c)] == 1.0);
            CHECK(params[static_cast<std::size_t>(l.param_offset + l.out_shape.c + c)] == 0.0);
        }
    }
}

TEST_CASE("init: conv weights follow the fan-in scaling") {
    // 3x3 conv with 16 input channels: variance should be near 2/(9*16)
    MacroSkeleton skel; // stem 16
    const NetworkSpec spec = instantiate_network(
        skel, genotype_from("|nor_conv_3x3~0|+|none~0|none~1|+|none~0|none~1|none~2|"));
    const LayerSpec* conv = nullptr;
    for (const LayerSpec& l : spec.layers)
        if (l.kind == LayerKind::Conv && l.tag.find("nor_conv_3x3") != std::string::npos &&
            l.c_in == 16)
            conv = &l;
    REQUIRE(conv != nullptr);

    double sum = 0.0, sum2 = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ParamVector params = init_params(spec, seed);
        for (std::int64_t i = 0; i < conv->param_count; ++i) {
            const double v = params[static_cast<std::size_t>(conv->param_offset + i)];
            sum += v;
            sum2 += v * v;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    const double target = 2.0 / (9.0 * 16.0);
    CHECK(var == doctest::Approx(target).epsilon(0.2));
}

TEST_CASE("forward: hand-computed 1x1 conv") {
    // Input(1,2,2) -> Conv1x1 (single weight w), logits = the 4 pixels
    std::vector<LayerSpec> layers(2);
    layers[0].kind = LayerKind::Input;
    layers[1].kind = LayerKind::Conv;
    layers[1].inputs = {0};
    layers[1].kernel = 1;
    layers[1].stride = 1;
    layers[1].pad = 0;
    layers[1].c_in = 1;
    layers[1].c_out = 1;
    const NetworkSpec spec = finalize_network(layers, {1, 2, 2}, 4);
    REQUIRE(spec.param_count == 1);

    const ParamVector params = {0.5};
    const Tensor x({1, 2, 2}, {1.0, 2.0, 3.0, 4.0});
    const Tensor logits = forward(spec, params, x).logits;
    CHECK(logits.data == std::vector<double>{0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("forward: zero-only cells leave only the classifier bias path") {
    MacroSkeleton skel{4, 2, 1, 3, {1, 4, 4}};
    const NetworkSpec spec =
        instantiate_network(skel, genotype_from("|none~0|+|none~0|none~1|"));
    ParamVector params = init_params(spec, 1);

    // plant a recognizable classifier bias
    const LayerSpec& fc = spec.layers.back();
    REQUIRE(fc.kind == LayerKind::Linear);
    const std::int64_t bias_offset = fc.param_offset +
                                     static_cast<std::int64_t>(fc.out_features) * fc.in_features;
    for (int o = 0; o < fc.out_features; ++o)
        params[static_cast<std::size_t>(bias_offset + o)] = 10.0 + o;

    const Tensor x = normal_input_batch({1, 4, 4}, 1, 99)[0];
    const ForwardResult res = forward(spec, params, x);
    CHECK(res.logits.data == std::vector<double>{10.0, 11.0, 12.0});

    // every ReLU sees an exactly-zero input, so no pattern bit is set
    for (std::uint64_t w : res.pattern.words) CHECK(w == 0);
}

TEST_CASE("forward: deterministic and invariant under scaling by 1.0") {
    MacroSkeleton skel{4, 2, 1, 3, {2, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, genotype_from("|nor_conv_3x3~0|+|avg_pool_3x3~0|skip_connect~1|"));
    const ParamVector params = init_params(spec, 11);
    const Tensor x = normal_input_batch({2, 4, 4}, 1, 5)[0];

    const ForwardResult a = forward(spec, params, x);
    Tensor scaled = x;
    for (double& v : scaled.data) v *= 1.0;
    const ForwardResult b = forward(spec, params, scaled);
    CHECK(a.logits == b.logits);
    CHECK(a.pattern == b.pattern);
}

TEST_CASE("forward: rejects shape mismatch") {
    const NetworkSpec spec = tiny_linear_net();
    const ParamVector params = init_params(spec, 1);
    CHECK_THROWS_AS(forward(spec, params, Tensor({2, 1, 1})), ShapeError);
}

TEST_CASE("gradient: linear model g = w.x") {
    const NetworkSpec spec = tiny_linear_net();
    ParamVector params = {0.2, -0.4, 0.6, 0.0}; // w then bias
    const Tensor x({3, 1, 1}, {1.0, 2.0, 3.0});
    const std::vector<double> grad = param_gradient(spec, params, x);
    CHECK(grad == std::vector<double>{1.0, 2.0, 3.0, 1.0});
}

TEST_CASE("gradient: disconnected cell operators have zero gradients") {
    // conv on edge (0,1); node 1 feeds nothing but none edges, so the
    // conv and its BN never reach the logits
    MacroSkeleton skel{4, 2, 1, 3, {1, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, genotype_from("|nor_conv_3x3~0|+|skip_connect~0|none~1|"));
    const ParamVector params = init_params(spec, 21);
    const Tensor x = normal_input_batch({1, 4, 4}, 1, 6)[0];
    const std::vector<double> grad = param_gradient(spec, params, x);

    bool found = false;
    for (const LayerSpec& l : spec.layers) {
        if (l.tag.find("n1.e0:nor_conv_3x3") == std::string::npos) continue;
        found = true;
        for (std::int64_t i = 0; i < l.param_count; ++i)
            CHECK(grad[static_cast<std::size_t>(l.param_offset + i)] == 0.0);
    }
    CHECK(found);
}

TEST_CASE("gradient: matches central finite differences on random small networks") {
    // shallow two-stack skeleton keeps every layer kind in play
    MacroSkeleton skel{3, 2, 1, 3, {2, 4, 4}};
    const char* genotypes[] = {
        "|nor_conv_3x3~0|+|skip_connect~0|avg_pool_3x3~1|",
        "|nor_conv_1x1~0|+|nor_conv_3x3~0|skip_connect~1|",
        "|avg_pool_3x3~0|+|none~0|nor_conv_1x1~1|",
        "|skip_connect~0|+|nor_conv_1x1~0|avg_pool_3x3~1|",
        "|nor_conv_3x3~0|+|none~0|nor_conv_3x3~1|",
    };
    int checked = 0;
    for (std::uint64_t i = 0; i < 5; ++i) {
        const NetworkSpec spec = instantiate_network(skel, genotype_from(genotypes[i]));
        REQUIRE(spec.param_count <= 10000);
        const ParamVector params = init_params(spec, 100 + i);
        const Tensor x = normal_input_batch({2, 4, 4}, 1, 200 + i)[0];
        const std::vector<double> analytic = param_gradient(spec, params, x);
        const std::vector<double> fd = fd_gradient(spec, params, x, 1e-5);
        CHECK(max_rel_error(analytic, fd) < 1e-6);
        ++checked;
    }
    CHECK(checked == 5);
}

TEST_CASE("piecewise linearity: fixed pattern means affine behaviour") {
    MacroSkeleton skel{3, 2, 1, 3, {2, 4, 4}};
    const NetworkSpec spec = instantiate_network(
        skel, genotype_from("|nor_conv_3x3~0|+|skip_connect~0|avg_pool_3x3~1|"));
    const ParamVector params = init_params(spec, 31);

    int verified = 0;
    for (std::uint64_t trial = 0; trial < 20 && verified < 5; ++trial) {
        const Tensor x1 = normal_input_batch({2, 4, 4}, 1, 300 + trial)[0];
        Tensor x2 = x1;
        {
            Rng rng(400 + trial);
            for (double& v : x2.data) v += 1e-6 * rng.next_normal();
        }
        const ForwardResult r1 = forward(spec, params, x1);
        const ForwardResult r2 = forward(spec, params, x2);
        if (!(r1.pattern == r2.pattern)) continue; // crossed a region boundary

        Tensor mid = x1;
        for (std::size_t i = 0; i < mid.data.size(); ++i)
            mid.data[i] = 0.5 * (x1.data[i] + x2.data[i]);
        const ForwardResult rm = forward(spec, params, mid);
        CHECK(rm.pattern == r1.pattern);
        for (std::size_t k = 0; k < rm.logits.data.size(); ++k)
            CHECK(std::fabs(rm.logits.data[k] -
                            0.5 * (r1.logits.data[k] + r2.logits.data[k])) <= 1e-9);
        ++verified;
    }
    CHECK(verified >= 5);
}
