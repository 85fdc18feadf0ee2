#include "monas/analysis.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "monas/parallel.hpp"
#include "monas/rng.hpp"

namespace monas {

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("kendall_tau inputs must have equal length");
    const std::size_t n = a.size();
    if (n < 2) throw ConfigError("kendall_tau needs at least two observations");

    std::int64_t concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (a[i] == a[j] || b[i] == b[j]) continue; // ties count as neither
            const bool same_order = (a[i] < a[j]) == (b[i] < b[j]);
            if (same_order)
                ++concordant;
            else
                ++discordant;
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return static_cast<double>(concordant - discordant) / pairs;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

std::vector<BenchmarkRecord> load_benchmark_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open accuracy csv: " + path);

    std::map<std::string, std::map<std::string, double>> by_genotype;
    std::vector<std::string> order;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "genotype,dataset,accuracy") continue;
        // genotype strings contain no commas, so a plain split is safe
        const auto cols = split_csv(line);
        if (cols.size() != 3)
            throw ParseError("accuracy csv line " + std::to_string(line_no) +
                             ": expected genotype,dataset,accuracy");
        if (cols[1].empty())
            throw ParseError("accuracy csv line " + std::to_string(line_no) +
                             ": empty dataset name");
        double acc = 0.0;
        auto [p, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), acc);
        if (ec != std::errc() || p != cols[2].data() + cols[2].size())
            throw ParseError("accuracy csv line " + std::to_string(line_no) +
                             ": malformed accuracy '" + cols[2] + "'");
        if (!by_genotype.count(cols[0])) order.push_back(cols[0]);
        by_genotype[cols[0]][cols[1]] = acc;
    }

    std::vector<BenchmarkRecord> records;
    records.reserve(order.size());
    for (const std::string& g : order) {
        parse_genotype(g); // validates early
        records.push_back({g, by_genotype[g]});
    }
    return records;
}

std::vector<CorrelationRow> correlate_proxy(const std::vector<BenchmarkRecord>& records,
                                            const MacroSkeleton& skeleton,
                                            const ProxyConfig& config,
                                            const SweepSpec& sweep,
                                            const LatencyTable* table) {
    if (records.size() < 2)
        throw ConfigError("correlate_proxy needs at least two records");
    if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");

    std::vector<CellGenotype> genotypes;
    genotypes.reserve(records.size());
    for (const BenchmarkRecord& r : records) genotypes.push_back(parse_genotype(r.genotype));

    std::vector<std::string> datasets;
    for (const auto& [name, acc] : records[0].accuracy) datasets.push_back(name);

    std::vector<CorrelationRow> rows;
    const std::string param_name =
        sweep.param == SweepSpec::Param::NtkIndex ? "ntk_index" : "batch_size";

    for (int value : sweep.values) {
        ProxyConfig cfg = config;
        if (sweep.param == SweepSpec::Param::NtkIndex)
            cfg.ntk_index = value;
        else
            cfg.batch_size = value;
        cfg.validate();

        const std::size_t n = records.size();
        std::vector<NetworkSpec> specs(n);
        parallel_for(n, [&](std::size_t i) {
            specs[i] = instantiate_network(skeleton, genotypes[i]);
        });

        // raw K and R averaged over the seed repetitions before ranking,
        // matching the convention the search uses
        std::vector<std::uint64_t> seeds;
        for (int rep = 0; rep < cfg.repetitions; ++rep)
            seeds.push_back(mix_seed(cfg.seed, 0xA11CE, static_cast<std::uint64_t>(rep)));

        std::vector<double> neg_k(n), regions(n), flops(n), latency(n);
        parallel_for(n, [&](std::size_t i) {
            const std::vector<Tensor> batch = normal_input_batch(
                specs[i].input_shape, cfg.batch_size, mix_seed(cfg.seed, 0xBA7C4));
            neg_k[i] = -ntk_condition_number(specs[i], seeds, batch, cfg.ntk_index);
            regions[i] = linear_region_count(specs[i], seeds, cfg.lr_samples,
                                             mix_seed(cfg.seed, 0x11A7));
        });
        for (std::size_t i = 0; i < n; ++i) {
            flops[i] = static_cast<double>(flops_estimate(specs[i]));
            if (table) latency[i] = latency_estimate(genotypes[i], *table, skeleton);
        }

        for (const std::string& dataset : datasets) {
            std::vector<double> acc(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = records[i].accuracy.find(dataset);
                if (it == records[i].accuracy.end())
                    throw ConfigError("record missing dataset accuracy: " + dataset);
                acc[i] = it->second;
            }
            rows.push_back({param_name, value, dataset, "neg_K", kendall_tau(neg_k, acc),
                            static_cast<int>(n)});
            rows.push_back({param_name, value, dataset, "R", kendall_tau(regions, acc),
                            static_cast<int>(n)});
            rows.push_back({param_name, value, dataset, "F", kendall_tau(flops, acc),
                            static_cast<int>(n)});
            if (table)
                rows.push_back({param_name, value, dataset, "L", kendall_tau(latency, acc),
                                static_cast<int>(n)});
        }
    }
    return rows;
}

std::vector<SpectrumPoint> flops_latency_spectrum(const std::vector<CellGenotype>& genotypes,
                                                  const LatencyTable& table,
                                                  const MacroSkeleton& skeleton) {
    std::vector<SpectrumPoint> points;
    points.reserve(genotypes.size());
    for (const CellGenotype& g : genotypes) {
        SpectrumPoint p;
        p.genotype = format_genotype(g);
        p.flops = flops_estimate(instantiate_network(skeleton, g));
        p.latency_ms = latency_estimate(g, table, skeleton);
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace monas
