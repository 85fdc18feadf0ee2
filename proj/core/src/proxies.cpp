#include "monas/proxies.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include "monas/jacobi.hpp"
#include "monas/parallel.hpp"
#include "monas/rng.hpp"

namespace monas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> ntk_gram(const NetworkSpec& spec, const ParamVector& params,
                             const std::vector<Tensor>& batch) {
    const int n = static_cast<int>(batch.size());
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
        rows[a] = param_gradient(spec, params, batch[a]);
    });

    std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
        for (std::size_t b = a; b < static_cast<std::size_t>(n); ++b) {
            const double* ra = rows[a].data();
            const double* rb = rows[b].data();
            double acc = 0.0;
            for (std::size_t p = 0; p < rows[a].size(); ++p) acc += ra[p] * rb[p];
            gram[a * n + b] = acc;
            gram[b * n + a] = acc;
        }
    });
    return gram;
}

NtkSpectrum ntk_spectrum_from_gram(std::vector<double> gram, int n) {
    NtkSpectrum s;
    s.batch_size = n;
    s.eigenvalues = symmetric_eigenvalues(std::move(gram), n);
    for (double& ev : s.eigenvalues)
        if (ev < 0.0) ev = 0.0;
    return s;
}

double ntk_condition_from_spectrum(const NtkSpectrum& spectrum, int i) {
    const int n = spectrum.batch_size;
    if (i < 0 || i > n - 1) throw ConfigError("ntk index i must satisfy 0 <= i <= n-1");
    const double top = spectrum.eigenvalues[0];
    const double bottom = spectrum.eigenvalues[static_cast<std::size_t>(n - i - 1)];
    if (top <= 0.0 || bottom <= kNtkRankEps * top) return kInf;
    return top / bottom;
}

double ntk_condition_number(const NetworkSpec& spec,
                            const std::vector<std::uint64_t>& params_seeds,
                            const std::vector<Tensor>& batch, int i) {
    if (params_seeds.empty()) throw ConfigError("ntk needs at least one parameter seed");
    const int n = static_cast<int>(batch.size());
    if (n < i + 1) throw ConfigError("ntk batch must have at least i+1 inputs");

    double acc = 0.0;
    for (std::uint64_t seed : params_seeds) {
        const ParamVector params = init_params(spec, seed);
        const NtkSpectrum spectrum = ntk_spectrum_from_gram(ntk_gram(spec, params, batch), n);
        const double k = ntk_condition_from_spectrum(spectrum, i);
        if (std::isinf(k)) return kInf;
        acc += k;
    }
    return acc / static_cast<double>(params_seeds.size());
}

double linear_region_count(const NetworkSpec& spec,
                           const std::vector<std::uint64_t>& params_seeds,
                           int lr_samples, std::uint64_t input_rng_seed) {
    if (params_seeds.empty()) throw ConfigError("lr count needs at least one parameter seed");
    if (lr_samples < 1) throw ConfigError("lr_samples must be >= 1");

    const std::vector<Tensor> inputs =
        normal_input_batch(spec.input_shape, lr_samples, input_rng_seed);

    double acc = 0.0;
    for (std::uint64_t seed : params_seeds) {
        const ParamVector params = init_params(spec, seed);
        std::vector<ActivationPattern> patterns(inputs.size());
        parallel_for(inputs.size(), [&](std::size_t s) {
            patterns[s] = forward(spec, params, inputs[s]).pattern;
        });
        std::unordered_set<ActivationPattern, ActivationPatternHash> distinct;
        for (auto& p : patterns) distinct.insert(std::move(p));
        acc += static_cast<double>(distinct.size());
    }
    return acc / static_cast<double>(params_seeds.size());
}

std::int64_t flops_estimate(const NetworkSpec& spec) {
    std::int64_t total = 0;
    for (const LayerSpec& l : spec.layers) {
        const FeatureShape& out = l.out_shape;
        switch (l.kind) {
        case LayerKind::Conv:
            total += 2LL * l.kernel * l.kernel * l.c_in * l.c_out * out.h * out.w;
            break;
        case LayerKind::Linear:
            total += 2LL * l.in_features * l.out_features;
            break;
        case LayerKind::BatchNorm:
            total += 2LL * out.numel();
            break;
        case LayerKind::AvgPool:
            total += static_cast<std::int64_t>(l.kernel) * l.kernel * out.numel();
            break;
        case LayerKind::GlobalAvgPool:
            total += spec.layers[static_cast<std::size_t>(l.inputs[0])].out_shape.numel();
            break;
        case LayerKind::Sum:
            total += static_cast<std::int64_t>(l.inputs.size() - 1) * out.numel();
            break;
        case LayerKind::Input:
        case LayerKind::ReLU:
        case LayerKind::Zero:
            break;
        }
    }
    return total;
}

double latency_estimate(const SupernetMask& mask, const LatencyTable& table,
                        const MacroSkeleton& skeleton) {
    skeleton.validate();
    double us = 0.0;
    for (int stage = 0; stage < skeleton.num_stacks; ++stage) {
        const FeatureShape s = stage_shape(skeleton, stage);
        double cell_us = 0.0;
        for (int e = 0; e < mask.topology.num_edges(); ++e) {
            for (std::size_t j = 0; j < mask.ops.size(); ++j) {
                if (!mask.alive[static_cast<std::size_t>(e)][j]) continue;
                if (mask.ops[j] == OperatorKind::Zero) continue;
                const LatencyKey key{std::string(operator_name(mask.ops[j])), stage,
                                     s.c, s.c, s.h, s.w};
                const auto it = table.entries.find(key);
                if (it == table.entries.end()) throw MissingEntryError(key.to_string());
                cell_us += it->second;
            }
        }
        us += cell_us * skeleton.cells_per_stack;
    }
    return (us + table.const_overhead_us) / 1000.0;
}

double latency_estimate(const CellGenotype& genotype, const LatencyTable& table,
                        const MacroSkeleton& skeleton) {
    return latency_estimate(SupernetMask::from_genotype(genotype, all_operators()),
                            table, skeleton);
}

void ProxyConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (ntk_index < 0 || ntk_index > batch_size - 1)
        throw ConfigError("ntk_index must satisfy 0 <= i <= batch_size-1");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (lr_samples < 1) throw ConfigError("lr_samples must be >= 1");
}

std::vector<Tensor> normal_input_batch(const FeatureShape& shape, int n,
                                       std::uint64_t seed) {
    std::vector<Tensor> batch;
    batch.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        Tensor t({shape.c, shape.h, shape.w});
        for (double& v : t.data) v = rng.next_normal();
        batch.push_back(std::move(t));
    }
    return batch;
}

ProxyVector measure_proxies(const CellGenotype& genotype, const MacroSkeleton& skeleton,
                            const ProxyConfig& config, const LatencyTable* table) {
    config.validate();
    const NetworkSpec spec = instantiate_network(skeleton, genotype);

    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < config.repetitions; ++r)
        seeds.push_back(mix_seed(config.seed, 0xA11CE, static_cast<std::uint64_t>(r)));

    const std::vector<Tensor> batch = normal_input_batch(
        spec.input_shape, config.batch_size, mix_seed(config.seed, 0xBA7C4));

    ProxyVector v;
    v.K = ntk_condition_number(spec, seeds, batch, config.ntk_index);
    v.R = linear_region_count(spec, seeds, config.lr_samples, mix_seed(config.seed, 0x11A7));
    v.F = flops_estimate(spec);
    if (table) v.L_ms = latency_estimate(genotype, *table, skeleton);
    return v;
}

} // namespace monas
