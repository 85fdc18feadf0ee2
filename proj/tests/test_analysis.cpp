#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "monas/analysis.hpp"
#include "monas/rng.hpp"

using namespace monas;

namespace {

/// Independent pairwise oracle: explicit sign products over index pairs.
double tau_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double numerator = 0.0;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            const double prod = (a[j] - a[i]) * (b[j] - b[i]);
            if (prod > 0.0)
                numerator += 1.0;
            else if (prod < 0.0)
                numerator -= 1.0;
        }
    return numerator / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<BenchmarkRecord> records_for(const std::vector<std::string>& genotypes,
                                         const std::vector<double>& acc,
                                         const std::string& dataset = "synthetic") {
    std::vector<BenchmarkRecord> records;
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        records.push_back({genotypes[i], {{dataset, acc[i]}}});
    return records;
}

std::vector<std::string> sample_genotypes(int count, std::uint64_t seed) {
    const CellTopology t4 = CellTopology::fully_connected(4);
    const auto& ops = all_operators();
    Rng rng(seed);
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) {
        CellGenotype g;
        g.topology = t4;
        for (int e = 0; e < 6; ++e) g.choice_per_edge.push_back(ops[rng.next_u64() % 5]);
        out.push_back(format_genotype(g));
    }
    return out;
}

double find_tau(const std::vector<CorrelationRow>& rows, const std::string& proxy) {
    for (const CorrelationRow& r : rows)
        if (r.proxy == proxy) return r.tau;
    REQUIRE(false);
    return 0.0;
}

} // namespace

TEST_CASE("kendall: identical and reversed orderings") {
    const std::vector<double> x = {3.0, 1.0, 4.0, 1.5, 9.0, 2.6};
    std::vector<double> reversed_rank(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) reversed_rank[i] = -x[i];
    CHECK(kendall_tau(x, x) == 1.0);
    CHECK(kendall_tau(x, reversed_rank) == -1.0);
}

TEST_CASE("kendall: worked example") {
    const std::vector<double> a = {1, 2, 3, 4};
    const std::vector<double> b = {1, 3, 2, 4};
    CHECK(kendall_tau(a, b) == (5.0 - 1.0) / 6.0);
}

TEST_CASE("kendall: errors") {
    CHECK_THROWS_AS(kendall_tau({1.0, 2.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(kendall_tau({1.0}, {1.0}), ConfigError);
}

TEST_CASE("kendall: exact agreement with the pairwise oracle") {
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(100), b(100);
        for (double& v : a) v = static_cast<double>(rng.next_u64() % 37); // int range forces ties
        for (double& v : b) v = rng.next_normal();
        const double tau = kendall_tau(a, b);
        CHECK(tau == tau_oracle(a, b));
        CHECK(std::fabs(tau) <= 1.0);
    }
}

TEST_CASE("correlate: accuracy equal to negated K gives tau(neg_K, acc) = 1") {
    const MacroSkeleton skel{2, 2, 1, 2, {1, 3, 3}};
    ProxyConfig cfg;
    cfg.batch_size = 4;
    cfg.ntk_index = 1;
    cfg.repetitions = 1;
    cfg.lr_samples = 4;
    cfg.seed = 11;

    const auto genotypes = sample_genotypes(8, 21);

    // reproduce the per-record K the pipeline will compute (repetition 0)
    std::vector<double> acc;
    for (const std::string& text : genotypes) {
        const NetworkSpec spec = instantiate_network(skel, parse_genotype(text));
        const auto batch =
            normal_input_batch(spec.input_shape, cfg.batch_size, mix_seed(cfg.seed, 0xBA7C4));
        const double k =
            ntk_condition_number(spec, {mix_seed(cfg.seed, 0xA11CE, 0)}, batch, cfg.ntk_index);
        REQUIRE(std::isfinite(k));
        acc.push_back(-k);
    }
    // the construction needs distinct K values to pin tau at exactly 1
    std::vector<double> sorted = acc;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

    SweepSpec sweep{SweepSpec::Param::BatchSize, {cfg.batch_size}};
    const auto rows = correlate_proxy(records_for(genotypes, acc), skel, cfg, sweep, nullptr);
    CHECK(find_tau(rows, "neg_K") == 1.0);
}

TEST_CASE("correlate: accuracy tracking R gives a strong positive tau") {
    // low-dimensional input and tiny channel counts: the bias-free nets
    // partition a 4-d input space into cones, so region counts vary with
    // the genotype instead of saturating at the sample count
    const MacroSkeleton skel{1, 3, 1, 2, {1, 2, 2}};
    ProxyConfig cfg;
    cfg.batch_size = 4;
    cfg.ntk_index = 1;
    cfg.repetitions = 3;
    cfg.lr_samples = 64;
    cfg.seed = 29;

    const auto genotypes = sample_genotypes(20, 31);

    std::vector<double> r_values;
    for (const std::string& text : genotypes) {
        const NetworkSpec spec = instantiate_network(skel, parse_genotype(text));
        std::vector<std::uint64_t> seeds;
        for (int rep = 0; rep < cfg.repetitions; ++rep)
            seeds.push_back(mix_seed(cfg.seed, 0xA11CE, static_cast<std::uint64_t>(rep)));
        r_values.push_back(
            linear_region_count(spec, seeds, cfg.lr_samples, mix_seed(cfg.seed, 0x11A7)));
    }
    double spread = 0.0, mean = 0.0;
    for (double v : r_values) mean += v;
    mean /= static_cast<double>(r_values.size());
    for (double v : r_values) spread += (v - mean) * (v - mean);
    const double sd = std::sqrt(spread / static_cast<double>(r_values.size()));
    REQUIRE(sd > 0.0);

    Rng noise(77);
    std::vector<double> acc;
    for (double v : r_values) acc.push_back(v + 0.01 * sd * noise.next_normal());

    SweepSpec sweep{SweepSpec::Param::BatchSize, {cfg.batch_size}};
    const auto rows = correlate_proxy(records_for(genotypes, acc), skel, cfg, sweep, nullptr);
    CHECK(find_tau(rows, "R") > 0.9);
}

TEST_CASE("correlate: sweep emits one row per value, dataset and proxy") {
    const MacroSkeleton skel{2, 2, 1, 2, {1, 3, 3}};
    ProxyConfig cfg;
    cfg.batch_size = 4;
    cfg.ntk_index = 1;
    cfg.repetitions = 1;
    cfg.lr_samples = 4;
    cfg.seed = 3;

    const auto genotypes = sample_genotypes(4, 5);
    std::vector<BenchmarkRecord> records;
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        records.push_back({genotypes[i],
                           {{"cifar10", 90.0 + static_cast<double>(i)},
                            {"cifar100", 70.0 - static_cast<double>(i)}}});

    SweepSpec sweep{SweepSpec::Param::BatchSize, {4, 8, 16}};
    const auto rows = correlate_proxy(records, skel, cfg, sweep, nullptr);
    CHECK(rows.size() == 3 * 2 * 3); // values x datasets x {neg_K, R, F}
    int batch8 = 0;
    for (const auto& r : rows) {
        CHECK(r.sweep_param == "batch_size");
        CHECK(r.sample_count == 4);
        if (r.sweep_value == 8) ++batch8;
    }
    CHECK(batch8 == 6);
}

TEST_CASE("correlate: unparsable genotype and short populations are rejected") {
    const MacroSkeleton skel{2, 2, 1, 2, {1, 3, 3}};
    ProxyConfig cfg;
    cfg.batch_size = 4;
    cfg.ntk_index = 0;
    cfg.repetitions = 1;
    cfg.lr_samples = 2;
    SweepSpec sweep{SweepSpec::Param::BatchSize, {4}};

    CHECK_THROWS_AS(
        correlate_proxy(records_for({"|bad~0|", "|none~0|"}, {1.0, 2.0}), skel, cfg, sweep,
                        nullptr),
        ParseError);
    CHECK_THROWS_AS(correlate_proxy(records_for({"|none~0|"}, {1.0}), skel, cfg, sweep, nullptr),
                    ConfigError);
}

TEST_CASE("spectrum: all-zero genotype sits at the overhead point") {
    MacroSkeleton skel;
    const LatencyTable table = make_synthetic_table(skel, all_operators(), 9);
    const CellGenotype zero =
        parse_genotype("|none~0|+|none~0|none~1|+|none~0|none~1|none~2|");
    const CellGenotype with_skip =
        parse_genotype("|skip_connect~0|+|none~0|none~1|+|none~0|none~1|none~2|");

    const auto points = flops_latency_spectrum({zero, with_skip}, table, skel);
    REQUIRE(points.size() == 2);
    CHECK(points[0].latency_ms == table.const_overhead_us / 1000.0);

    // equal FLOPs (skip is free arithmetic) but distinguishable latency
    CHECK(points[0].flops == points[1].flops);
    CHECK(points[1].latency_ms > points[0].latency_ms);
}

TEST_CASE("spectrum: 100 random genotypes produce 100 nonnegative rows") {
    MacroSkeleton skel;
    const LatencyTable table = make_synthetic_table(skel, all_operators(), 10);
    std::vector<CellGenotype> genotypes;
    for (const std::string& s : sample_genotypes(100, 41))
        genotypes.push_back(parse_genotype(s));
    const auto points = flops_latency_spectrum(genotypes, table, skel);
    REQUIRE(points.size() == 100);
    for (const auto& p : points) {
        CHECK(p.flops >= 0);
        CHECK(p.latency_ms >= table.const_overhead_us / 1000.0);
    }
}
