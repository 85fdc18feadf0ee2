#include "monas/latency_table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "monas/rng.hpp"

namespace monas {

namespace {

constexpr const char* kHeader = "op,stage,c_in,c_out,h,w,latency_us";
constexpr const char* kOverheadOp = "__const_overhead__";

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

int parse_int(const std::string& s, int line_no) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("latency table line " + std::to_string(line_no) +
                         ": malformed integer '" + s + "'");
    return v;
}

double parse_double(const std::string& s, int line_no) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("latency table line " + std::to_string(line_no) +
                         ": malformed number '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string LatencyKey::to_string() const {
    return op + ",stage=" + std::to_string(stage) + ",c_in=" + std::to_string(c_in) +
           ",c_out=" + std::to_string(c_out) + ",h=" + std::to_string(h) +
           ",w=" + std::to_string(w);
}

LatencyTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open latency table: " + path);

    LatencyTable table;
    table.device_name = std::filesystem::path(path).stem().string();

    std::string line;
    int line_no = 0;
    bool have_overhead = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != kHeader)
                throw ParseError("latency table header must be '" + std::string(kHeader) + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 7)
            throw ParseError("latency table line " + std::to_string(line_no) +
                             ": expected 7 columns, got " + std::to_string(cols.size()));
        const double value = parse_double(cols[6], line_no);
        if (!std::isfinite(value) || value < 0.0)
            throw ParseError("latency table line " + std::to_string(line_no) +
                             ": latency must be finite and >= 0");
        if (cols[0] == kOverheadOp) {
            if (have_overhead)
                throw ParseError("duplicate const_overhead row at line " + std::to_string(line_no));
            have_overhead = true;
            table.const_overhead_us = value;
            continue;
        }
        LatencyKey key{cols[0], parse_int(cols[1], line_no), parse_int(cols[2], line_no),
                       parse_int(cols[3], line_no), parse_int(cols[4], line_no),
                       parse_int(cols[5], line_no)};
        if (!table.entries.emplace(key, value).second)
            throw ParseError("duplicate latency table key at line " + std::to_string(line_no) +
                             ": " + key.to_string());
    }
    if (!have_overhead) throw ParseError("latency table is missing the const_overhead row");
    return table;
}

void save_table(const LatencyTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write latency table: " + path);
    out << kHeader << '\n';
    out << kOverheadOp << ",0,0,0,0,0," << format_double(table.const_overhead_us) << '\n';
    for (const auto& [key, value] : table.entries) {
        out << key.op << ',' << key.stage << ',' << key.c_in << ',' << key.c_out << ','
            << key.h << ',' << key.w << ',' << format_double(value) << '\n';
    }
    if (!out.good()) throw IoError("write failure on latency table: " + path);
}

std::vector<LatencyKey> validate_coverage(const LatencyTable& table,
                                          const MacroSkeleton& skeleton,
                                          const CellTopology& topology,
                                          const std::vector<OperatorKind>& ops) {
    (void)topology; // every edge of every cell shares the stage configuration
    std::vector<LatencyKey> missing;
    for (int stage = 0; stage < skeleton.num_stacks; ++stage) {
        const FeatureShape s = stage_shape(skeleton, stage);
        for (OperatorKind op : ops) {
            if (op == OperatorKind::Zero) continue;
            LatencyKey key{std::string(operator_name(op)), stage, s.c, s.c, s.h, s.w};
            if (!table.entries.count(key)) missing.push_back(std::move(key));
        }
    }
    return missing;
}

LatencyTable make_synthetic_table(const MacroSkeleton& skeleton,
                                  const std::vector<OperatorKind>& ops,
                                  std::uint64_t seed,
                                  const std::string& device_name) {
    LatencyTable table;
    table.device_name = device_name;

    auto op_cost_us = [](OperatorKind op, const FeatureShape& s) {
        const double hw = static_cast<double>(s.h) * s.w;
        const double c = static_cast<double>(s.c);
        // roughly FLOPs/500 (slow-MCU scale) plus a per-op dispatch offset
        switch (op) {
        case OperatorKind::SkipConnect:
            return c * hw / 500.0 + 5.0;
        case OperatorKind::Conv1x1:
            return (2.0 * c * c * hw + 2.0 * c * hw) / 500.0 + 30.0;
        case OperatorKind::Conv3x3:
            return (18.0 * c * c * hw + 2.0 * c * hw) / 500.0 + 50.0;
        case OperatorKind::AvgPool3x3:
            return 9.0 * c * hw / 500.0 + 15.0;
        case OperatorKind::Zero:
            return 0.0;
        }
        return 0.0;
    };

    for (int stage = 0; stage < skeleton.num_stacks; ++stage) {
        const FeatureShape s = stage_shape(skeleton, stage);
        for (OperatorKind op : ops) {
            if (op == OperatorKind::Zero) continue;
            LatencyKey key{std::string(operator_name(op)), stage, s.c, s.c, s.h, s.w};
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(stage),
                             static_cast<std::uint64_t>(op)));
            const double jitter = 1.0 + 0.2 * (2.0 * rng.next_unit() - 1.0);
            table.entries[key] = op_cost_us(op, s) * jitter;
        }
    }

    // genotype-independent part: stem + reductions + classifier, same scale
    double fixed = 500.0;
    {
        const FeatureShape in = skeleton.input_shape;
        fixed += 18.0 * in.c * skeleton.stem_channels * in.h * in.w / 500.0;
        for (int stage = 0; stage + 1 < skeleton.num_stacks; ++stage) {
            const FeatureShape s = stage_shape(skeleton, stage + 1);
            fixed += (18.0 * s.c * s.c * s.h * s.w * 1.5) / 500.0;
        }
    }
    Rng rng(mix_seed(seed, 0x0f));
    table.const_overhead_us = fixed * (1.0 + 0.1 * rng.next_unit());
    return table;
}

} // namespace monas
