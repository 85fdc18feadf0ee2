// monas: hardware-aware zero-shot architecture search over cell spaces.
//
// Subcommands: search, score, latency, flops, correlate, spectrum,
// enumerate, gen-table. Every subcommand accepts --config <json>; flags
// override config fields, MONAS_SEED / MONAS_WORKERS env vars override
// config but not explicit flags.
//
// Exit codes: 0 success, 1 config/validation error, 2 missing latency
// table entry or coverage failure, 3 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "monas/analysis.hpp"
#include "monas/engine.hpp"
#include "monas/errors.hpp"
#include "monas/genotype.hpp"
#include "monas/latency_table.hpp"
#include "monas/proxies.hpp"
#include "monas/rng.hpp"
#include "monas/search.hpp"
#include "monas/skeleton.hpp"

using nlohmann::json;

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };
LogLevel g_log_level = LogLevel::Info;

void log_msg(LogLevel level, const std::string& msg) {
    if (level > g_log_level) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[monas:%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

// ---------------------------------------------------------------------
// config document
// ---------------------------------------------------------------------

json default_config() {
    return json{
        {"subcommand", ""},
        {"seed", 1},
        {"workers", 0},
        {"log_level", "info"},
        {"space",
         {{"num_nodes", 4},
          {"ops", {"none", "skip_connect", "nor_conv_1x1", "nor_conv_3x3", "avg_pool_3x3"}}}},
        {"skeleton",
         {{"stem_channels", 16},
          {"num_stacks", 3},
          {"cells_per_stack", 1},
          {"num_classes", 10},
          {"input_shape", {3, 8, 8}}}},
        {"proxy",
         {{"ntk_index", 2}, {"batch_size", 32}, {"repetitions", 3}, {"lr_samples", 128}}},
        {"search",
         {{"lambda_flops", 0.0},
          {"mu_latency", 0.0},
          {"prune_per_edge_per_iter", 1},
          {"rank_only", ""}}},
        {"table_path", nullptr},
        {"genotype", nullptr},
        {"accuracy_csv", nullptr},
        {"sweep", {{"param", "batch_size"}, {"values", {32}}}},
        {"genotypes_path", nullptr},
        {"sample_count", 0},
        {"output", {{"report_path", nullptr}, {"csv_path", nullptr}, {"text_path", nullptr}}},
    };
}

void merge_into(json& base, const json& overlay) {
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object())
            merge_into(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

json load_config_document(const std::string& path) {
    json cfg = default_config();
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw monas::IoError("cannot open config file: " + path);
    json user;
    try {
        in >> user;
    } catch (const json::exception& e) {
        throw monas::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!user.is_object()) throw monas::ConfigError("config document must be a JSON object");
    merge_into(cfg, user);
    return cfg;
}

monas::MacroSkeleton skeleton_from(const json& cfg) {
    const json& s = cfg.at("skeleton");
    monas::MacroSkeleton skel;
    try {
        skel.stem_channels = s.at("stem_channels").get<int>();
        skel.num_stacks = s.at("num_stacks").get<int>();
        skel.cells_per_stack = s.at("cells_per_stack").get<int>();
        skel.num_classes = s.at("num_classes").get<int>();
        const auto shape = s.at("input_shape").get<std::vector<int>>();
        if (shape.size() != 3)
            throw monas::ConfigError("skeleton.input_shape must be [channels, height, width]");
        skel.input_shape = {shape[0], shape[1], shape[2]};
    } catch (const json::exception& e) {
        throw monas::ConfigError(std::string("bad skeleton config: ") + e.what());
    }
    skel.validate();
    return skel;
}

std::vector<monas::OperatorKind> ops_from(const json& cfg) {
    std::vector<monas::OperatorKind> ops;
    for (const auto& name : cfg.at("space").at("ops")) {
        const auto op = monas::operator_from_name(name.get<std::string>());
        if (!op)
            throw monas::ConfigError("unknown operator name in space.ops: " +
                                     name.get<std::string>());
        ops.push_back(*op);
    }
    if (ops.empty()) throw monas::ConfigError("space.ops must be non-empty");
    return ops;
}

monas::CellTopology topology_from(const json& cfg) {
    return monas::CellTopology::fully_connected(cfg.at("space").at("num_nodes").get<int>());
}

monas::ProxyConfig proxy_config_from(const json& cfg) {
    const json& p = cfg.at("proxy");
    monas::ProxyConfig pc;
    pc.ntk_index = p.at("ntk_index").get<int>();
    pc.batch_size = p.at("batch_size").get<int>();
    pc.repetitions = p.at("repetitions").get<int>();
    pc.lr_samples = p.at("lr_samples").get<int>();
    pc.seed = cfg.at("seed").get<std::uint64_t>();
    return pc;
}

std::optional<monas::LatencyTable> table_from(const json& cfg) {
    if (cfg.at("table_path").is_null()) return std::nullopt;
    return monas::load_table(cfg.at("table_path").get<std::string>());
}

monas::SearchConfig search_config_from(const json& cfg) {
    const json& s = cfg.at("search");
    monas::SearchConfig sc;
    sc.lambda_flops = s.at("lambda_flops").get<double>();
    sc.mu_latency = s.at("mu_latency").get<double>();
    sc.prune_per_edge_per_iter = s.at("prune_per_edge_per_iter").get<int>();
    const std::string rank_only = s.at("rank_only").get<std::string>();
    if (rank_only == "flops")
        sc.rank_only = monas::SearchConfig::RankOnly::Flops;
    else if (rank_only == "latency")
        sc.rank_only = monas::SearchConfig::RankOnly::Latency;
    else if (!rank_only.empty())
        throw monas::ConfigError("search.rank_only must be \"\", \"flops\" or \"latency\"");
    const monas::ProxyConfig pc = proxy_config_from(cfg);
    sc.ntk_index = pc.ntk_index;
    sc.batch_size = pc.batch_size;
    sc.repetitions = pc.repetitions;
    sc.lr_samples = pc.lr_samples;
    sc.seed = pc.seed;
    sc.table = table_from(cfg);
    return sc;
}

// ---------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------

/// Serialize a real that may be +infinity (JSON has no literal for it).
json json_real(double v) {
    if (std::isinf(v)) return json("inf");
    return json(v);
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw monas::IoError("cannot write file: " + tmp.string());
        out << content;
        if (!out.good()) throw monas::IoError("write failure: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw monas::IoError("cannot finalize file " + path + ": " + ec.message());
}

void emit_text(const json& cfg, const std::string& key, const std::string& content) {
    const json& out = cfg.at("output").at(key);
    if (out.is_null())
        std::cout << content;
    else
        atomic_write(out.get<std::string>(), content);
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

json proxies_to_json(const monas::ProxyVector& v) {
    json j{{"K", json_real(v.K)}, {"R", v.R}, {"F", v.F}};
    j["L_ms"] = v.L_ms ? json(*v.L_ms) : json(nullptr);
    return j;
}

json report_to_json(const monas::SearchReport& report, const json& cfg) {
    json iterations = json::array();
    for (const monas::IterationRecord& it : report.history) {
        json scores = json::array();
        for (const monas::ScoredDelta& s : it.scores) {
            scores.push_back({{"edge", s.delta.edge},
                              {"op", std::string(monas::operator_name(s.delta.op))},
                              {"dK", json_real(s.delta.dK)},
                              {"dR", s.delta.dR},
                              {"dF", s.delta.dF},
                              {"dL", s.delta.dL},
                              {"k_removal_leaves_infinite", s.delta.k_removal_leaves_infinite},
                              {"k_with_infinite", s.delta.k_with_infinite},
                              {"rank_K", s.rank_k},
                              {"rank_R", s.rank_r},
                              {"rank_F", s.rank_f},
                              {"rank_L", s.rank_l},
                              {"score", s.score}});
        }
        json pruned = json::array();
        for (const auto& [edge, op] : it.pruned)
            pruned.push_back({{"edge", edge}, {"op", std::string(monas::operator_name(op))}});
        iterations.push_back(
            {{"iteration", it.iteration}, {"scores", scores}, {"pruned", pruned}});
    }
    json result{{"genotype", monas::format_genotype(report.genotype)},
                {"final_proxies", proxies_to_json(report.final_proxies)},
                {"eval_count", report.eval_counter},
                {"iterations", iterations},
                {"config", cfg}};
    json metadata{{"timestamp", timestamp_utc()}, {"wall_time_s", report.wall_time_s}};
    return json{{"result", result}, {"metadata", metadata}};
}

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

int cmd_search(const json& cfg) {
    const monas::SearchConfig sc = search_config_from(cfg);
    const monas::MacroSkeleton skeleton = skeleton_from(cfg);
    const monas::CellTopology topology = topology_from(cfg);
    const std::vector<monas::OperatorKind> ops = ops_from(cfg);

    log_msg(LogLevel::Info, "searching " + std::to_string(ops.size()) + "^" +
                                std::to_string(topology.num_edges()) +
                                " cell space, seed=" + std::to_string(sc.seed));
    const monas::SearchReport report = monas::run_prune_search(topology, ops, skeleton, sc);
    log_msg(LogLevel::Info,
            "search finished: " + std::to_string(report.eval_counter) + " delta evaluations in " +
                std::to_string(report.wall_time_s) + "s");

    const json& report_path = cfg.at("output").at("report_path");
    if (!report_path.is_null())
        atomic_write(report_path.get<std::string>(), report_to_json(report, cfg).dump(2) + "\n");
    std::cout << monas::format_genotype(report.genotype) << "\n";
    return 0;
}

int cmd_score(const json& cfg) {
    if (cfg.at("genotype").is_null())
        throw monas::ConfigError("score requires a genotype (--genotype or config)");
    const monas::CellGenotype g = monas::parse_genotype(cfg.at("genotype").get<std::string>());
    const monas::MacroSkeleton skeleton = skeleton_from(cfg);
    const monas::ProxyConfig pc = proxy_config_from(cfg);
    const std::optional<monas::LatencyTable> table = table_from(cfg);

    const monas::ProxyVector v =
        monas::measure_proxies(g, skeleton, pc, table ? &*table : nullptr);
    json record = proxies_to_json(v);
    record["genotype"] = monas::format_genotype(g);
    emit_text(cfg, "text_path", record.dump() + "\n");
    return 0;
}

int cmd_latency(const json& cfg) {
    if (cfg.at("genotype").is_null())
        throw monas::ConfigError("latency requires a genotype (--genotype or config)");
    if (cfg.at("table_path").is_null())
        throw monas::ConfigError("latency requires a table (--table or config)");
    const monas::CellGenotype g = monas::parse_genotype(cfg.at("genotype").get<std::string>());
    const double ms = monas::latency_estimate(g, *table_from(cfg), skeleton_from(cfg));
    emit_text(cfg, "text_path", csv_double(ms) + "\n");
    return 0;
}

int cmd_flops(const json& cfg) {
    if (cfg.at("genotype").is_null())
        throw monas::ConfigError("flops requires a genotype (--genotype or config)");
    const monas::CellGenotype g = monas::parse_genotype(cfg.at("genotype").get<std::string>());
    const std::int64_t f =
        monas::flops_estimate(monas::instantiate_network(skeleton_from(cfg), g));
    emit_text(cfg, "text_path", std::to_string(f) + "\n");
    return 0;
}

int cmd_enumerate(const json& cfg) {
    const monas::CellTopology topology = topology_from(cfg);
    const std::vector<monas::OperatorKind> ops = ops_from(cfg);
    monas::GenotypeEnumerator en(topology, ops);
    std::ostringstream out;
    while (auto g = en.next()) out << monas::format_genotype(*g) << "\n";
    emit_text(cfg, "text_path", out.str());
    return 0;
}

int cmd_correlate(const json& cfg) {
    if (cfg.at("accuracy_csv").is_null())
        throw monas::ConfigError("correlate requires an accuracy csv path");
    const auto records = monas::load_benchmark_csv(cfg.at("accuracy_csv").get<std::string>());

    monas::SweepSpec sweep;
    const std::string param = cfg.at("sweep").at("param").get<std::string>();
    if (param == "ntk_index")
        sweep.param = monas::SweepSpec::Param::NtkIndex;
    else if (param == "batch_size")
        sweep.param = monas::SweepSpec::Param::BatchSize;
    else
        throw monas::ConfigError("sweep.param must be \"ntk_index\" or \"batch_size\"");
    sweep.values = cfg.at("sweep").at("values").get<std::vector<int>>();

    const std::optional<monas::LatencyTable> table = table_from(cfg);
    const auto rows = monas::correlate_proxy(records, skeleton_from(cfg),
                                             proxy_config_from(cfg), sweep,
                                             table ? &*table : nullptr);
    std::ostringstream out;
    out << "sweep_param,sweep_value,dataset,proxy,tau,sample_count\n";
    for (const auto& r : rows)
        out << r.sweep_param << ',' << r.sweep_value << ',' << r.dataset << ',' << r.proxy
            << ',' << csv_double(r.tau) << ',' << r.sample_count << "\n";
    emit_text(cfg, "csv_path", out.str());
    return 0;
}

int cmd_spectrum(const json& cfg) {
    if (cfg.at("table_path").is_null())
        throw monas::ConfigError("spectrum requires a table (--table or config)");
    const monas::MacroSkeleton skeleton = skeleton_from(cfg);
    const std::optional<monas::LatencyTable> table = table_from(cfg);

    std::vector<monas::CellGenotype> genotypes;
    if (!cfg.at("genotypes_path").is_null()) {
        const std::string path = cfg.at("genotypes_path").get<std::string>();
        std::ifstream in(path);
        if (!in) throw monas::IoError("cannot open genotype list: " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) genotypes.push_back(monas::parse_genotype(line));
        }
    } else {
        const int n = cfg.at("sample_count").get<int>();
        if (n <= 0)
            throw monas::ConfigError("spectrum needs genotypes_path or sample_count > 0");
        const monas::CellTopology topology = topology_from(cfg);
        const std::vector<monas::OperatorKind> ops = ops_from(cfg);
        monas::Rng rng(cfg.at("seed").get<std::uint64_t>());
        for (int i = 0; i < n; ++i) {
            monas::CellGenotype g;
            g.topology = topology;
            for (int e = 0; e < topology.num_edges(); ++e)
                g.choice_per_edge.push_back(ops[rng.next_u64() % ops.size()]);
            genotypes.push_back(std::move(g));
        }
    }

    const auto points = monas::flops_latency_spectrum(genotypes, *table, skeleton);
    std::ostringstream out;
    out << "genotype,flops,latency_ms\n";
    for (const auto& p : points)
        out << p.genotype << ',' << p.flops << ',' << csv_double(p.latency_ms) << "\n";
    emit_text(cfg, "csv_path", out.str());
    return 0;
}

int cmd_gen_table(const json& cfg, const std::string& device) {
    const json& out = cfg.at("output").at("csv_path");
    if (out.is_null()) throw monas::ConfigError("gen-table requires an output path");
    const monas::LatencyTable table =
        monas::make_synthetic_table(skeleton_from(cfg), ops_from(cfg),
                                    cfg.at("seed").get<std::uint64_t>(),
                                    device.empty() ? "synthetic" : device);
    monas::save_table(table, out.get<std::string>());
    log_msg(LogLevel::Info, "wrote synthetic table with " +
                                std::to_string(table.entries.size()) + " entries");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardware-aware zero-shot cell search"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");

    // flag storage; only applied when the user passed the flag
    std::uint64_t seed = 0;
    int workers = -1;
    std::string log_level, genotype, table_path, report_path, csv_path, text_path;
    std::string accuracy_csv, genotypes_path, rank_only, sweep_param, device;
    double lambda = -1.0, mu = -1.0;
    int batch_size = 0, repetitions = 0, lr_samples = 0, ntk_index = -1;
    int prune_per_iter = 0, num_nodes = 0, sample_count = -1;
    std::vector<int> sweep_values;
    std::vector<std::string> op_names;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--workers", workers, "worker pool size (0 = all CPUs)");
        sub->add_option("--log-level", log_level, "error|warn|info|debug");
        sub->add_option("--nodes", num_nodes, "cell node count");
        sub->add_option("--ops", op_names, "operator names")->delimiter(',');
    };

    CLI::App* search = app.add_subcommand("search", "prune the supernet to a single path");
    add_common(search);
    search->add_option("--lambda", lambda, "FLOPs weight in [0,1)");
    search->add_option("--mu", mu, "latency weight in [0,1)");
    search->add_option("--table", table_path, "latency table csv");
    search->add_option("--report", report_path, "report JSON path");
    search->add_option("--batch-size", batch_size);
    search->add_option("--repetitions", repetitions);
    search->add_option("--lr-samples", lr_samples);
    search->add_option("--ntk-index", ntk_index);
    search->add_option("--prune-per-iter", prune_per_iter);
    search->add_option("--rank-only", rank_only, "score on one rank: flops|latency");

    CLI::App* score = app.add_subcommand("score", "measure K, R, F, L for one genotype");
    add_common(score);
    score->add_option("--genotype", genotype);
    score->add_option("--table", table_path);
    score->add_option("--batch-size", batch_size);
    score->add_option("--repetitions", repetitions);
    score->add_option("--lr-samples", lr_samples);
    score->add_option("--ntk-index", ntk_index);
    score->add_option("--output", text_path);

    CLI::App* latency = app.add_subcommand("latency", "latency of one genotype in ms");
    add_common(latency);
    latency->add_option("--genotype", genotype);
    latency->add_option("--table", table_path);
    latency->add_option("--output", text_path);

    CLI::App* flops = app.add_subcommand("flops", "FLOPs of one genotype");
    add_common(flops);
    flops->add_option("--genotype", genotype);
    flops->add_option("--output", text_path);

    CLI::App* correlate = app.add_subcommand("correlate", "Kendall tau vs accuracies");
    add_common(correlate);
    correlate->add_option("--accuracy-csv", accuracy_csv);
    correlate->add_option("--table", table_path);
    correlate->add_option("--sweep-param", sweep_param, "ntk_index|batch_size");
    correlate->add_option("--sweep-values", sweep_values)->delimiter(',');
    correlate->add_option("--batch-size", batch_size);
    correlate->add_option("--repetitions", repetitions);
    correlate->add_option("--lr-samples", lr_samples);
    correlate->add_option("--output", csv_path);

    CLI::App* spectrum = app.add_subcommand("spectrum", "FLOPs vs latency csv");
    add_common(spectrum);
    spectrum->add_option("--genotypes-file", genotypes_path);
    spectrum->add_option("--sample", sample_count, "random genotype count");
    spectrum->add_option("--table", table_path);
    spectrum->add_option("--output", csv_path);

    CLI::App* enumerate = app.add_subcommand("enumerate", "list every genotype in the space");
    add_common(enumerate);
    enumerate->add_option("--output", text_path);

    CLI::App* gen_table = app.add_subcommand("gen-table", "write a synthetic latency table");
    add_common(gen_table);
    gen_table->add_option("--output", csv_path);
    gen_table->add_option("--device", device);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        json cfg = load_config_document(config_path);

        // env overrides config, explicit flags override env
        if (const char* env_seed = std::getenv("MONAS_SEED")) {
            cfg["seed"] = std::strtoull(env_seed, nullptr, 10);
        }
        if (seed != 0) cfg["seed"] = seed;
        if (workers >= 0) cfg["workers"] = workers;
        if (!log_level.empty()) cfg["log_level"] = log_level;
        if (!genotype.empty()) cfg["genotype"] = genotype;
        if (!table_path.empty()) cfg["table_path"] = table_path;
        if (!report_path.empty()) cfg["output"]["report_path"] = report_path;
        if (!csv_path.empty()) cfg["output"]["csv_path"] = csv_path;
        if (!text_path.empty()) cfg["output"]["text_path"] = text_path;
        if (!accuracy_csv.empty()) cfg["accuracy_csv"] = accuracy_csv;
        if (!genotypes_path.empty()) cfg["genotypes_path"] = genotypes_path;
        if (sample_count >= 0) cfg["sample_count"] = sample_count;
        if (lambda >= 0.0) cfg["search"]["lambda_flops"] = lambda;
        if (mu >= 0.0) cfg["search"]["mu_latency"] = mu;
        if (!rank_only.empty()) cfg["search"]["rank_only"] = rank_only;
        if (prune_per_iter > 0) cfg["search"]["prune_per_edge_per_iter"] = prune_per_iter;
        if (batch_size > 0) cfg["proxy"]["batch_size"] = batch_size;
        if (repetitions > 0) cfg["proxy"]["repetitions"] = repetitions;
        if (lr_samples > 0) cfg["proxy"]["lr_samples"] = lr_samples;
        if (ntk_index >= 0) cfg["proxy"]["ntk_index"] = ntk_index;
        if (num_nodes > 0) cfg["space"]["num_nodes"] = num_nodes;
        if (!op_names.empty()) cfg["space"]["ops"] = op_names;
        if (!sweep_param.empty()) cfg["sweep"]["param"] = sweep_param;
        if (!sweep_values.empty()) cfg["sweep"]["values"] = sweep_values;

        const std::string level = cfg.at("log_level").get<std::string>();
        if (level == "error") g_log_level = LogLevel::Error;
        else if (level == "warn") g_log_level = LogLevel::Warn;
        else if (level == "info") g_log_level = LogLevel::Info;
        else if (level == "debug") g_log_level = LogLevel::Debug;
        else throw monas::ConfigError("log_level must be error|warn|info|debug");

        // propagate the worker count to the pool without clobbering an
        // explicit MONAS_WORKERS env var
        if (workers >= 0 || !std::getenv("MONAS_WORKERS")) {
            const int w = cfg.at("workers").get<int>();
            if (w > 0) setenv("MONAS_WORKERS", std::to_string(w).c_str(), 1);
        }

        std::string sub = cfg.at("subcommand").get<std::string>();
        for (CLI::App* s : app.get_subcommands()) sub = s->get_name();
        if (sub.empty())
            throw monas::ConfigError("no subcommand given (argv or config \"subcommand\")");
        cfg["subcommand"] = sub;

        if (sub == "search") return cmd_search(cfg);
        if (sub == "score") return cmd_score(cfg);
        if (sub == "latency") return cmd_latency(cfg);
        if (sub == "flops") return cmd_flops(cfg);
        if (sub == "correlate") return cmd_correlate(cfg);
        if (sub == "spectrum") return cmd_spectrum(cfg);
        if (sub == "enumerate") return cmd_enumerate(cfg);
        if (sub == "gen-table") return cmd_gen_table(cfg, device);
        throw monas::ConfigError("unknown subcommand: " + sub);
    } catch (const monas::MissingEntryError& e) {
        std::fprintf(stderr, "error: missing-entry: %s\n", e.what());
        return 2;
    } catch (const monas::IoError& e) {
        std::fprintf(stderr, "error: io: %s\n", e.what());
        return 3;
    } catch (const monas::ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 1;
    } catch (const monas::ParseError& e) {
        std::fprintf(stderr, "error: parse: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
}
