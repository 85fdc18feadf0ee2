#ifndef MONAS_PROXIES_HPP
#define MONAS_PROXIES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "monas/engine.hpp"
#include "monas/latency_table.hpp"
#include "monas/network.hpp"
#include "monas/skeleton.hpp"

namespace monas {

/// Relative rank-deficiency threshold: lambda_{n-i} at or below
/// eps * lambda_1 makes the condition number Infinite. Matches the
/// noise floor of the 64-bit eigensolver.
inline constexpr double kNtkRankEps = 1e-12;

/// Eigenvalues of the batch Gram of parameter gradients, descending,
/// clamped at zero (the Gram is PSD up to solver noise).
struct NtkSpectrum {
    std::vector<double> eigenvalues;
    int batch_size = 0;
};

/// The four indicator measurements for one candidate. K may be
/// +infinity (rank-deficient kernel); L_ms is absent without a device
/// profile.
struct ProxyVector {
    double K = 0.0;
    double R = 0.0;
    std::int64_t F = 0;
    std::optional<double> L_ms;
};

/// Gram of per-input gradient rows: gram[a*n+b] = <J(x_a), J(x_b)> for
/// the scalar-reduction output g(x) = sum of logits.
std::vector<double> ntk_gram(const NetworkSpec& spec, const ParamVector& params,
                             const std::vector<Tensor>& batch);

NtkSpectrum ntk_spectrum_from_gram(std::vector<double> gram, int n);

/// K_i = lambda_1 / lambda_{n-i}; +infinity when lambda_{n-i} falls at or
/// below kNtkRankEps * lambda_1 (or the spectrum is entirely zero).
double ntk_condition_from_spectrum(const NtkSpectrum& spectrum, int i);

/// Mean of K_i over one freshly initialized network per seed; +infinity
/// if any seed's kernel is rank-deficient at index i. Requires
/// |batch| >= i + 1.
double ntk_condition_number(const NetworkSpec& spec,
                            const std::vector<std::uint64_t>& params_seeds,
                            const std::vector<Tensor>& batch, int i);

/// Mean over seeds of the number of distinct ReLU activation patterns
/// hit by lr_samples standard-normal inputs.
double linear_region_count(const NetworkSpec& spec,
                           const std::vector<std::uint64_t>& params_seeds,
                           int lr_samples, std::uint64_t input_rng_seed);

/// Exact operation count. Convention: one multiply-accumulate = 2 ops;
/// BatchNorm = 2 per element; AvgPool = k^2 per output element;
/// GlobalAvgPool = 1 per input element; Sum of b branches = (b-1) adds
/// per element; ReLU, Zero and skip wiring are free.
std::int64_t flops_estimate(const NetworkSpec& spec);

/// Sum of table lookups over every cell instance, edge and alive
/// operator, plus the constant overhead; reported in milliseconds
/// (table entries are microseconds). Zero contributes nothing and needs
/// no entry. Throws MissingEntryError when the profile lacks a key.
double latency_estimate(const SupernetMask& mask, const LatencyTable& table,
                        const MacroSkeleton& skeleton);
double latency_estimate(const CellGenotype& genotype, const LatencyTable& table,
                        const MacroSkeleton& skeleton);

/// Seeds and sizes for one standalone proxy measurement.
struct ProxyConfig {
    int ntk_index = 2;
    int batch_size = 32;
    int repetitions = 3;
    int lr_samples = 128;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Standard-normal input batch used by the NTK and LR proxies.
std::vector<Tensor> normal_input_batch(const FeatureShape& shape, int n,
                                       std::uint64_t seed);

/// Full four-indicator measurement of one genotype: K and R averaged
/// over `repetitions` derived seeds, exact F, and L when a table is
/// given.
ProxyVector measure_proxies(const CellGenotype& genotype, const MacroSkeleton& skeleton,
                            const ProxyConfig& config, const LatencyTable* table);

} // namespace monas

#endif
