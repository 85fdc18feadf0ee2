#ifndef MONAS_SEARCH_HPP
#define MONAS_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "monas/genotype.hpp"
#include "monas/latency_table.hpp"
#include "monas/proxies.hpp"
#include "monas/skeleton.hpp"

namespace monas {

/// Hybrid-score search configuration. lambda_flops and mu_latency weight
/// the hardware rank in the score; they are mutually exclusive and live
/// in [0,1). mu_latency > 0 requires a latency table.
struct SearchConfig {
    double lambda_flops = 0.0;
    double mu_latency = 0.0;
    int ntk_index = 2;
    int batch_size = 32;
    int repetitions = 3;
    int lr_samples = 128;
    std::uint64_t seed = 1;
    int prune_per_edge_per_iter = 1;
    std::optional<LatencyTable> table;

    /// Score on a single hardware rank instead of the hybrid score;
    /// emulates the lambda->1 (or mu->1) limit for exactness checks
    /// against brute force.
    enum class RankOnly { None, Flops, Latency };
    RankOnly rank_only = RankOnly::None;

    void validate() const;
    ProxyConfig proxy_config() const;
};

/// Effect of removing one operator from one edge: indicator value with
/// the operator minus value without it, averaged over repetitions.
/// Infinite condition numbers are tracked as flags so the ranking stays
/// a total order; dK then averages the repetitions where both sides were
/// finite.
struct DeltaRecord {
    int edge = 0;
    OperatorKind op = OperatorKind::Zero;
    double dK = 0.0;
    double dR = 0.0;
    double dF = 0.0;
    double dL = 0.0;
    bool k_removal_leaves_infinite = false; // pruning it breaks trainability: ranks last
    bool k_with_infinite = false;           // pruning it restores a finite K: ranks first
};

struct ScoredDelta {
    DeltaRecord delta;
    int rank_k = 0, rank_r = 0, rank_f = 0, rank_l = 0;
    double score = 0.0;
};

struct IterationRecord {
    int iteration = 0;
    std::vector<ScoredDelta> scores; // ordered by (edge, op)
    std::vector<std::pair<int, OperatorKind>> pruned;
};

struct SearchState {
    std::vector<SupernetMask> masks; // one per cell type; one type exercised
    int iteration = 0;
    std::int64_t eval_counter = 0; // delta evaluations performed
    std::vector<IterationRecord> history;
};

struct SearchReport {
    CellGenotype genotype;
    ProxyVector final_proxies;
    std::vector<IterationRecord> history;
    std::int64_t eval_counter = 0;
    double wall_time_s = 0.0;
};

/// Which indicators the score actually consumes; lets an evaluator skip
/// the expensive ones in rank-only or hardware-free configurations.
struct ProxyNeeds {
    bool k = true, r = true, f = true, l = true;
};

struct MaskProxySample {
    double K = 0.0; // may be +infinity
    double R = 0.0;
    std::int64_t F = 0;
    double L_ms = 0.0;
};

/// Scores one supernet mask under one derived seed. The default
/// evaluator runs the real proxies; tests inject stubs (e.g. counting
/// mode).
using MaskEvaluator =
    std::function<MaskProxySample(const SupernetMask&, std::uint64_t eval_seed,
                                  const ProxyNeeds&)>;

/// Joint ranking of all prunable (edge, op) pairs and the weighted-rank
/// score. Rank index 0 is the most favorable to prune in each ordering:
/// dK, dF, dL descending; dR ascending. Ties break by (edge, operator)
/// ascending. Pure function; exposed for tests and reports.
std::vector<ScoredDelta> rank_and_score(const std::vector<DeltaRecord>& deltas,
                                        const SearchConfig& config);

/// Pruning-by-score search over one cell type. The loop: evaluate paired
/// deltas for every prunable operator, rank jointly, remove the
/// lowest-score operators per edge, repeat until single-path.
class PruneSearch {
public:
    PruneSearch(CellTopology topology, std::vector<OperatorKind> ops,
                MacroSkeleton skeleton, SearchConfig config);

    void set_evaluator(MaskEvaluator evaluator);

    /// Paired with/without evaluation of every prunable (edge, op) on the
    /// current mask. Seeds derive from (seed, iteration, edge, op,
    /// repetition) only, so results are independent of scheduling.
    std::vector<DeltaRecord> evaluate_deltas();

    /// Removes up to prune_per_edge_per_iter lowest-score operators per
    /// edge (never the last one), appends the history entry and advances
    /// the iteration counter.
    void prune_step(const std::vector<ScoredDelta>& scores);

    SearchReport run();

    const SearchState& state() const { return state_; }

private:
    CellTopology topology_;
    std::vector<OperatorKind> ops_;
    MacroSkeleton skeleton_;
    SearchConfig config_;
    MaskEvaluator evaluator_;
    SearchState state_;
    ProxyNeeds needs_;
};

/// One-call form of the search; returns the single-path genotype and the
/// full audit report. Deterministic given config.seed.
SearchReport run_prune_search(const CellTopology& topology,
                              const std::vector<OperatorKind>& ops,
                              const MacroSkeleton& skeleton, const SearchConfig& config);

} // namespace monas

#endif
