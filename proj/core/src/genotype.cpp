#include "monas/genotype.hpp"

#include <algorithm>
#include <charconv>

namespace monas {

namespace {
constexpr std::string_view kOpNames[kNumOperators] = {
    "none", "skip_connect", "nor_conv_1x1", "nor_conv_3x3", "avg_pool_3x3",
};
}

std::string_view operator_name(OperatorKind op) {
    return kOpNames[static_cast<int>(op)];
}

std::optional<OperatorKind> operator_from_name(std::string_view name) {
    for (int i = 0; i < kNumOperators; ++i)
        if (kOpNames[i] == name) return static_cast<OperatorKind>(i);
    return std::nullopt;
}

const std::vector<OperatorKind>& all_operators() {
    static const std::vector<OperatorKind> ops = {
        OperatorKind::Zero, OperatorKind::SkipConnect, OperatorKind::Conv1x1,
        OperatorKind::Conv3x3, OperatorKind::AvgPool3x3,
    };
    return ops;
}

CellTopology CellTopology::fully_connected(int num_nodes) {
    if (num_nodes < 2) throw ConfigError("cell topology needs >= 2 nodes");
    CellTopology t;
    t.num_nodes = num_nodes;
    for (int dst = 1; dst < num_nodes; ++dst)
        for (int src = 0; src < dst; ++src)
            t.edges.emplace_back(src, dst);
    return t;
}

CellTopology CellTopology::from_edges(int num_nodes,
                                      std::vector<std::pair<int, int>> edges) {
    if (num_nodes < 2) throw ConfigError("cell topology needs >= 2 nodes");
    if (edges.empty()) throw ConfigError("cell topology needs >= 1 edge");
    for (auto [src, dst] : edges) {
        if (src < 0 || dst >= num_nodes || src >= dst)
            throw ConfigError("topology edge must satisfy 0 <= src < dst < num_nodes");
    }
    // Canonical order: grouped by dst ascending, then src ascending.
    std::sort(edges.begin(), edges.end(), [](auto a, auto b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] == edges[i - 1]) throw ConfigError("duplicate topology edge");
    CellTopology t;
    t.num_nodes = num_nodes;
    t.edges = std::move(edges);
    return t;
}

SupernetMask SupernetMask::full(CellTopology topology, std::vector<OperatorKind> ops) {
    if (ops.empty()) throw ConfigError("operator set must be non-empty");
    SupernetMask m;
    m.alive.assign(static_cast<std::size_t>(topology.num_edges()),
                   std::vector<bool>(ops.size(), true));
    m.topology = std::move(topology);
    m.ops = std::move(ops);
    return m;
}

int SupernetMask::alive_count(int edge) const {
    const auto& row = alive[static_cast<std::size_t>(edge)];
    return static_cast<int>(std::count(row.begin(), row.end(), true));
}

int SupernetMask::total_alive() const {
    int n = 0;
    for (int e = 0; e < topology.num_edges(); ++e) n += alive_count(e);
    return n;
}

bool SupernetMask::is_single_path() const {
    for (int e = 0; e < topology.num_edges(); ++e)
        if (alive_count(e) != 1) return false;
    return true;
}

CellGenotype SupernetMask::to_genotype() const {
    CellGenotype g;
    g.topology = topology;
    g.choice_per_edge.reserve(alive.size());
    for (std::size_t e = 0; e < alive.size(); ++e) {
        if (alive_count(static_cast<int>(e)) != 1)
            throw ConfigError("mask edge does not have exactly one alive operator");
        for (std::size_t j = 0; j < ops.size(); ++j)
            if (alive[e][j]) {
                g.choice_per_edge.push_back(ops[j]);
                break;
            }
    }
    return g;
}

SupernetMask SupernetMask::from_genotype(const CellGenotype& g,
                                         std::vector<OperatorKind> ops) {
    SupernetMask m;
    m.topology = g.topology;
    m.ops = std::move(ops);
    m.alive.assign(g.choice_per_edge.size(), std::vector<bool>(m.ops.size(), false));
    for (std::size_t e = 0; e < g.choice_per_edge.size(); ++e) {
        auto it = std::find(m.ops.begin(), m.ops.end(), g.choice_per_edge[e]);
        if (it == m.ops.end())
            throw ConfigError("genotype operator not in mask operator set");
        m.alive[e][static_cast<std::size_t>(it - m.ops.begin())] = true;
    }
    return m;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

CellGenotype parse_genotype(const std::string& text) {
    if (text.empty()) throw ParseError("empty genotype string");

    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<std::pair<int, int>, OperatorKind>> choices;

    const auto groups = split(text, '+');
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const int dst = static_cast<int>(gi) + 1;
        const std::string& group = groups[gi];
        if (group == "|") continue; // node with no incoming edges
        if (group.size() < 2 || group.front() != '|' || group.back() != '|')
            throw ParseError("malformed node grouping: group must be |...| delimited");
        std::vector<bool> seen_src(static_cast<std::size_t>(dst), false);
        const auto items = split(group.substr(1, group.size() - 2), '|');
        for (const std::string& item : items) {
            if (item.empty())
                throw ParseError("malformed node grouping: empty edge entry");
            const auto tilde = item.rfind('~');
            if (tilde == std::string::npos)
                throw ParseError("malformed edge entry (expected op~src): " + item);
            const std::string op_name = item.substr(0, tilde);
            const std::string src_text = item.substr(tilde + 1);
            const auto op = operator_from_name(op_name);
            if (!op) throw ParseError("unknown operator name: " + op_name);
            int src = -1;
            auto [p, ec] = std::from_chars(src_text.data(), src_text.data() + src_text.size(), src);
            if (ec != std::errc() || p != src_text.data() + src_text.size())
                throw ParseError("malformed source index: " + src_text);
            if (src < 0 || src >= dst)
                throw ParseError("source index must be < destination node index");
            if (seen_src[static_cast<std::size_t>(src)])
                throw ParseError("malformed node grouping: duplicate source index");
            seen_src[static_cast<std::size_t>(src)] = true;
            choices.push_back({{src, dst}, *op});
        }
    }
    if (choices.empty()) throw ParseError("genotype has no edges");

    // Canonicalize: dst ascending, src ascending within each group.
    std::sort(choices.begin(), choices.end(), [](const auto& a, const auto& b) {
        return a.first.second != b.first.second ? a.first.second < b.first.second
                                                : a.first.first < b.first.first;
    });
    CellGenotype g;
    edges.reserve(choices.size());
    for (const auto& [edge, op] : choices) {
        edges.push_back(edge);
        g.choice_per_edge.push_back(op);
    }
    g.topology = CellTopology::from_edges(static_cast<int>(groups.size()) + 1,
                                          std::move(edges));
    return g;
}

std::string format_genotype(const CellGenotype& g) {
    std::string out;
    std::size_t e = 0;
    for (int dst = 1; dst < g.topology.num_nodes; ++dst) {
        if (dst > 1) out += '+';
        out += '|';
        while (e < g.topology.edges.size() && g.topology.edges[e].second == dst) {
            out += operator_name(g.choice_per_edge[e]);
            out += '~';
            out += std::to_string(g.topology.edges[e].first);
            out += '|';
            ++e;
        }
        // a node with no incoming edges renders as the bare group "|"
    }
    return out;
}

GenotypeEnumerator::GenotypeEnumerator(CellTopology topology,
                                       std::vector<OperatorKind> ops)
    : topology_(std::move(topology)), ops_(std::move(ops)) {
    if (ops_.empty()) throw ConfigError("operator set must be non-empty");
    counters_.assign(static_cast<std::size_t>(topology_.num_edges()), 0);
    total_ = 1;
    for (int e = 0; e < topology_.num_edges(); ++e)
        total_ *= static_cast<std::uint64_t>(ops_.size());
}

std::optional<CellGenotype> GenotypeEnumerator::next() {
    if (emitted_ >= total_) return std::nullopt;
    CellGenotype g;
    g.topology = topology_;
    g.choice_per_edge.reserve(counters_.size());
    for (int c : counters_) g.choice_per_edge.push_back(ops_[static_cast<std::size_t>(c)]);
    ++emitted_;
    // Odometer increment, last edge fastest, so edge 0 orders the stream.
    for (int e = topology_.num_edges() - 1; e >= 0; --e) {
        auto& c = counters_[static_cast<std::size_t>(e)];
        if (++c < static_cast<int>(ops_.size())) break;
        c = 0;
    }
    return g;
}

std::vector<CellGenotype> enumerate_space(const CellTopology& topology,
                                          const std::vector<OperatorKind>& ops) {
    GenotypeEnumerator en(topology, ops);
    std::vector<CellGenotype> out;
    out.reserve(static_cast<std::size_t>(en.total()));
    while (auto g = en.next()) out.push_back(std::move(*g));
    return out;
}

} // namespace monas
