#ifndef MONAS_GENOTYPE_HPP
#define MONAS_GENOTYPE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monas/errors.hpp"

namespace monas {

/// The five cell operators. Enum order is the canonical operator order
/// used for enumeration, masks and tie-breaking.
enum class OperatorKind : int {
    Zero = 0,
    SkipConnect = 1,
    Conv1x1 = 2,
    Conv3x3 = 3,
    AvgPool3x3 = 4,
};

inline constexpr int kNumOperators = 5;

std::string_view operator_name(OperatorKind op);
std::optional<OperatorKind> operator_from_name(std::string_view name);

/// All five operators in enum order.
const std::vector<OperatorKind>& all_operators();

/// Cell wiring: a DAG on nodes 0..num_nodes-1 with edges (src, dst),
/// src < dst, stored grouped by dst ascending then src ascending.
/// fully_connected() builds the canonical cell (one edge per ordered
/// pair; num_nodes = 4 gives E = 6). Sparse edge lists are accepted for
/// reduced spaces, e.g. an E = 2 slice of a 3-node cell.
struct CellTopology {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;

    static CellTopology fully_connected(int num_nodes);
    static CellTopology from_edges(int num_nodes, std::vector<std::pair<int, int>> edges);

    int num_edges() const { return static_cast<int>(edges.size()); }
    bool operator==(const CellTopology& o) const = default;
};

/// One chosen operator per edge: a single-path cell.
struct CellGenotype {
    CellTopology topology;
    std::vector<OperatorKind> choice_per_edge;

    bool operator==(const CellGenotype& o) const = default;
};

/// Supernet cell: per edge, the subset of `ops` still alive. Pruning
/// clears bits; every edge keeps at least one alive operator.
struct SupernetMask {
    CellTopology topology;
    std::vector<OperatorKind> ops;      // operator universe, fixed order
    std::vector<std::vector<bool>> alive; // [edge][op index into ops]

    /// All operators alive on every edge.
    static SupernetMask full(CellTopology topology, std::vector<OperatorKind> ops);

    int alive_count(int edge) const;
    int total_alive() const;
    bool is_single_path() const;

    /// Defined iff every edge has exactly one alive operator.
    CellGenotype to_genotype() const;
    static SupernetMask from_genotype(const CellGenotype& g, std::vector<OperatorKind> ops);

    bool operator==(const SupernetMask& o) const = default;
};

/// Parses the community cell-string grammar
///   |op~src|+|op~src|op~src|+...
/// where group k holds the edges into node k+1. Throws ParseError on an
/// unknown operator name, malformed grouping (duplicate source, empty
/// group entry) or src >= dst.
CellGenotype parse_genotype(const std::string& text);

/// Inverse of parse_genotype; emits the canonical form (sources ascending
/// within each group). parse(format(g)) == g for every genotype.
std::string format_genotype(const CellGenotype& g);

/// Streams all |ops|^E genotypes in lexicographic order by edge index
/// (edge 0 is the most significant position; operators in `ops` order).
class GenotypeEnumerator {
public:
    GenotypeEnumerator(CellTopology topology, std::vector<OperatorKind> ops);

    std::optional<CellGenotype> next();
    /// |ops|^E
    std::uint64_t total() const { return total_; }

private:
    CellTopology topology_;
    std::vector<OperatorKind> ops_;
    std::vector<int> counters_;
    std::uint64_t total_ = 0;
    std::uint64_t emitted_ = 0;
};

/// Materializes the whole space; intended for spaces that fit in memory
/// (the canonical 4-node/5-op space is 15,625 genotypes).
std::vector<CellGenotype> enumerate_space(const CellTopology& topology,
                                          const std::vector<OperatorKind>& ops);

} // namespace monas

#endif
