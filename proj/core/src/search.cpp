#include "monas/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "monas/parallel.hpp"
#include "monas/rng.hpp"

namespace monas {

void SearchConfig::validate() const {
    if (lambda_flops < 0.0 || lambda_flops >= 1.0)
        throw ConfigError("lambda_flops must lie in [0,1)");
    if (mu_latency < 0.0 || mu_latency >= 1.0)
        throw ConfigError("mu_latency must lie in [0,1)");
    if (lambda_flops > 0.0 && mu_latency > 0.0)
        throw ConfigError("lambda_flops and mu_latency are mutually exclusive: "
                          "only one hardware indicator may be weighted at a time");
    if (mu_latency > 0.0 && !table)
        throw ConfigError("mu_latency > 0 requires a latency table");
    if (rank_only == RankOnly::Latency && !table)
        throw ConfigError("latency-rank scoring requires a latency table");
    if (prune_per_edge_per_iter < 1)
        throw ConfigError("prune_per_edge_per_iter must be >= 1");
    proxy_config().validate();
}

ProxyConfig SearchConfig::proxy_config() const {
    ProxyConfig p;
    p.ntk_index = ntk_index;
    p.batch_size = batch_size;
    p.repetitions = repetitions;
    p.lr_samples = lr_samples;
    p.seed = seed;
    return p;
}

namespace {

/// Favorability-to-prune orderings. Each returns true when a should be
/// ranked before b (rank 0 = first = most favorable to prune).
bool tie_before(const DeltaRecord& a, const DeltaRecord& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.op < b.op;
}

bool k_before(const DeltaRecord& a, const DeltaRecord& b) {
    // class 0: removal restores a finite K (delta effectively +inf)
    // class 1: finite deltas, descending
    // class 2: removal leaves K infinite - never favorable, ranks last
    auto cls = [](const DeltaRecord& d) {
        if (d.k_removal_leaves_infinite) return 2;
        return d.k_with_infinite ? 0 : 1;
    };
    const int ca = cls(a), cb = cls(b);
    if (ca != cb) return ca < cb;
    if (ca == 1 && a.dK != b.dK) return a.dK > b.dK;
    return tie_before(a, b);
}

bool r_before(const DeltaRecord& a, const DeltaRecord& b) {
    if (a.dR != b.dR) return a.dR < b.dR; // ascending: small expressivity loss first
    return tie_before(a, b);
}

bool f_before(const DeltaRecord& a, const DeltaRecord& b) {
    if (a.dF != b.dF) return a.dF > b.dF; // biggest FLOPs saving first
    return tie_before(a, b);
}

bool l_before(const DeltaRecord& a, const DeltaRecord& b) {
    if (a.dL != b.dL) return a.dL > b.dL; // biggest latency saving first
    return tie_before(a, b);
}

std::vector<int> rank_indices(const std::vector<DeltaRecord>& deltas,
                              bool (*before)(const DeltaRecord&, const DeltaRecord&)) {
    std::vector<int> order(deltas.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return before(deltas[static_cast<std::size_t>(a)], deltas[static_cast<std::size_t>(b)]);
    });
    std::vector<int> rank(deltas.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        rank[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
    return rank;
}

} // namespace

std::vector<ScoredDelta> rank_and_score(const std::vector<DeltaRecord>& deltas,
                                        const SearchConfig& config) {
    if (deltas.empty()) throw ConfigError("rank_and_score needs a non-empty delta list");

    const std::vector<int> rk = rank_indices(deltas, k_before);
    const std::vector<int> rr = rank_indices(deltas, r_before);
    const std::vector<int> rf = rank_indices(deltas, f_before);
    const std::vector<int> rl = rank_indices(deltas, l_before);

    std::vector<ScoredDelta> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        ScoredDelta& s = out[i];
        s.delta = deltas[i];
        s.rank_k = rk[i];
        s.rank_r = rr[i];
        s.rank_f = rf[i];
        s.rank_l = rl[i];
        switch (config.rank_only) {
        case SearchConfig::RankOnly::Flops:
            s.score = s.rank_f;
            break;
        case SearchConfig::RankOnly::Latency:
            s.score = s.rank_l;
            break;
        case SearchConfig::RankOnly::None:
            if (config.lambda_flops > 0.0) {
                s.score = (1.0 - config.lambda_flops) / 2.0 * (s.rank_k + s.rank_r) +
                          config.lambda_flops * s.rank_f;
            } else if (config.mu_latency > 0.0) {
                s.score = (1.0 - config.mu_latency) / 2.0 * (s.rank_k + s.rank_r) +
                          config.mu_latency * s.rank_l;
            } else {
                s.score = (s.rank_k + s.rank_r) / 2.0;
            }
            break;
        }
    }
    // report order: by (edge, op)
    std::sort(out.begin(), out.end(), [](const ScoredDelta& a, const ScoredDelta& b) {
        return tie_before(a.delta, b.delta);
    });
    return out;
}

PruneSearch::PruneSearch(CellTopology topology, std::vector<OperatorKind> ops,
                         MacroSkeleton skeleton, SearchConfig config)
    : topology_(std::move(topology)), ops_(std::move(ops)),
      skeleton_(std::move(skeleton)), config_(std::move(config)) {
    config_.validate();
    skeleton_.validate();
    if (ops_.empty()) throw ConfigError("operator set must be non-empty");
    state_.masks = {SupernetMask::full(topology_, ops_)};

    needs_ = ProxyNeeds{};
    if (config_.rank_only == SearchConfig::RankOnly::Flops)
        needs_ = {false, false, true, false};
    else if (config_.rank_only == SearchConfig::RankOnly::Latency)
        needs_ = {false, false, false, true};
    else if (config_.mu_latency > 0.0)
        needs_ = {true, true, true, true};
    else
        needs_ = {true, true, true, config_.table.has_value()};

    const MacroSkeleton skel = skeleton_;
    const SearchConfig cfg = config_;
    evaluator_ = [skel, cfg](const SupernetMask& mask, std::uint64_t eval_seed,
                             const ProxyNeeds& needs) {
        MaskProxySample sample;
        const NetworkSpec spec = instantiate_network(skel, mask);
        if (needs.k) {
            const std::vector<Tensor> batch = normal_input_batch(
                spec.input_shape, cfg.batch_size, mix_seed(eval_seed, 0xBA7C4));
            sample.K = ntk_condition_number(spec, {mix_seed(eval_seed, 0xA11CE)}, batch,
                                            cfg.ntk_index);
        }
        if (needs.r) {
            sample.R = linear_region_count(spec, {mix_seed(eval_seed, 0xA11CE)},
                                           cfg.lr_samples, mix_seed(eval_seed, 0x11A7));
        }
        if (needs.f) sample.F = flops_estimate(spec);
        if (needs.l && cfg.table) sample.L_ms = latency_estimate(mask, *cfg.table, skel);
        return sample;
    };
}

void PruneSearch::set_evaluator(MaskEvaluator evaluator) {
    evaluator_ = std::move(evaluator);
}

std::vector<DeltaRecord> PruneSearch::evaluate_deltas() {
    struct Task {
        int cell_type;
        int edge;
        std::size_t op_index;
    };
    std::vector<Task> tasks;
    for (std::size_t ct = 0; ct < state_.masks.size(); ++ct) {
        const SupernetMask& mask = state_.masks[ct];
        for (int e = 0; e < mask.topology.num_edges(); ++e) {
            if (mask.alive_count(e) < 2) continue; // cannot prune the last operator
            for (std::size_t j = 0; j < mask.ops.size(); ++j)
                if (mask.alive[static_cast<std::size_t>(e)][j])
                    tasks.push_back({static_cast<int>(ct), e, j});
        }
    }

    std::vector<DeltaRecord> deltas(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const SupernetMask& mask = state_.masks[static_cast<std::size_t>(task.cell_type)];
        SupernetMask pruned = mask;
        pruned.alive[static_cast<std::size_t>(task.edge)][task.op_index] = false;

        DeltaRecord d;
        d.edge = task.edge;
        d.op = mask.ops[task.op_index];

        const std::uint64_t base =
            mix_seed(config_.seed, static_cast<std::uint64_t>(task.cell_type));
        double sum_k = 0.0, sum_r = 0.0, sum_f = 0.0, sum_l = 0.0;
        int finite_k_reps = 0;
        for (int rep = 0; rep < config_.repetitions; ++rep) {
            // paired evaluation: identical seed on both sides of the delta
            const std::uint64_t eval_seed =
                mix_seed(base, static_cast<std::uint64_t>(state_.iteration),
                         static_cast<std::uint64_t>(task.edge),
                         static_cast<std::uint64_t>(d.op),
                         static_cast<std::uint64_t>(rep));
            const MaskProxySample with_op = evaluator_(mask, eval_seed, needs_);
            const MaskProxySample without_op = evaluator_(pruned, eval_seed, needs_);

            if (std::isinf(without_op.K)) {
                d.k_removal_leaves_infinite = true;
            } else if (std::isinf(with_op.K)) {
                d.k_with_infinite = true;
            } else {
                sum_k += with_op.K - without_op.K;
                ++finite_k_reps;
            }
            sum_r += with_op.R - without_op.R;
            sum_f += static_cast<double>(with_op.F - without_op.F);
            sum_l += with_op.L_ms - without_op.L_ms;
        }
        const double reps = static_cast<double>(config_.repetitions);
        d.dK = finite_k_reps > 0 ? sum_k / finite_k_reps : 0.0;
        d.dR = sum_r / reps;
        d.dF = sum_f / reps;
        d.dL = sum_l / reps;
        deltas[ti] = d;
    });

    state_.eval_counter += static_cast<std::int64_t>(tasks.size());
    return deltas;
}

void PruneSearch::prune_step(const std::vector<ScoredDelta>& scores) {
    IterationRecord record;
    record.iteration = state_.iteration;
    record.scores = scores;

    for (std::size_t ct = 0; ct < state_.masks.size(); ++ct) {
        SupernetMask& mask = state_.masks[ct];
        for (int e = 0; e < mask.topology.num_edges(); ++e) {
            const int alive = mask.alive_count(e);
            if (alive < 2) continue;
            // candidates on this edge, lowest score first
            std::vector<const ScoredDelta*> edge_scores;
            for (const ScoredDelta& s : scores)
                if (s.delta.edge == e) edge_scores.push_back(&s);
            std::sort(edge_scores.begin(), edge_scores.end(),
                      [](const ScoredDelta* a, const ScoredDelta* b) {
                          if (a->score != b->score) return a->score < b->score;
                          return a->delta.op < b->delta.op;
                      });
            const int removable = std::min(config_.prune_per_edge_per_iter, alive - 1);
            for (int r = 0; r < removable && r < static_cast<int>(edge_scores.size()); ++r) {
                const OperatorKind op = edge_scores[static_cast<std::size_t>(r)]->delta.op;
                const auto it = std::find(mask.ops.begin(), mask.ops.end(), op);
                mask.alive[static_cast<std::size_t>(e)][
                    static_cast<std::size_t>(it - mask.ops.begin())] = false;
                record.pruned.emplace_back(e, op);
            }
        }
    }
    ++state_.iteration;
    state_.history.push_back(std::move(record));
}

SearchReport PruneSearch::run() {
    const auto t0 = std::chrono::steady_clock::now();
    while (!state_.masks[0].is_single_path()) {
        const std::vector<DeltaRecord> deltas = evaluate_deltas();
        if (deltas.empty()) break; // already single-path everywhere
        prune_step(rank_and_score(deltas, config_));
    }

    SearchReport report;
    report.genotype = state_.masks[0].to_genotype();
    report.history = state_.history;
    report.eval_counter = state_.eval_counter;
    report.final_proxies =
        measure_proxies(report.genotype, skeleton_, config_.proxy_config(),
                        config_.table ? &*config_.table : nullptr);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SearchReport run_prune_search(const CellTopology& topology,
                              const std::vector<OperatorKind>& ops,
                              const MacroSkeleton& skeleton, const SearchConfig& config) {
    PruneSearch search(topology, ops, skeleton, config);
    return search.run();
}

} // namespace monas
