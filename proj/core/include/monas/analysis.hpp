#ifndef MONAS_ANALYSIS_HPP
#define MONAS_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "monas/latency_table.hpp"
#include "monas/proxies.hpp"
#include "monas/skeleton.hpp"

namespace monas {

/// Kendall tau-a: (concordant - discordant) / (n(n-1)/2); pairs tied in
/// either list count as neither. Throws ConfigError on length mismatch
/// or fewer than two observations.
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

/// One benchmark architecture with user-supplied accuracies per dataset.
/// Accuracies are ingested, never computed; this engine trains nothing.
struct BenchmarkRecord {
    std::string genotype;
    std::map<std::string, double> accuracy; // dataset -> accuracy in [0,100]
};

std::vector<BenchmarkRecord> load_benchmark_csv(const std::string& path);

struct SweepSpec {
    enum class Param { NtkIndex, BatchSize };
    Param param = Param::NtkIndex;
    std::vector<int> values;
};

struct CorrelationRow {
    std::string sweep_param;
    int sweep_value = 0;
    std::string dataset;
    std::string proxy; // "neg_K" (negated condition number), "R", "F", "L"
    double tau = 0.0;
    int sample_count = 0;
};

/// For each sweep point, scores every record (K and R averaged over
/// `config.repetitions` seed repetitions, the same raw-value averaging
/// the search uses) and reports Kendall tau of each proxy against each
/// dataset's accuracy. The condition number is negated before
/// correlating (it anti-correlates with accuracy); the row is labeled
/// "neg_K" so the orientation stays explicit.
std::vector<CorrelationRow> correlate_proxy(const std::vector<BenchmarkRecord>& records,
                                            const MacroSkeleton& skeleton,
                                            const ProxyConfig& config,
                                            const SweepSpec& sweep,
                                            const LatencyTable* table);

struct SpectrumPoint {
    std::string genotype;
    std::int64_t flops = 0;
    double latency_ms = 0.0;
};

/// (FLOPs, latency) pair per genotype; the plot-ready view of how the
/// two hardware indicators disagree across a space.
std::vector<SpectrumPoint> flops_latency_spectrum(const std::vector<CellGenotype>& genotypes,
                                                  const LatencyTable& table,
                                                  const MacroSkeleton& skeleton);

} // namespace monas

#endif
