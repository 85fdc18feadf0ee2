#ifndef MONAS_LATENCY_TABLE_HPP
#define MONAS_LATENCY_TABLE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "monas/genotype.hpp"
#include "monas/skeleton.hpp"

namespace monas {

/// Lookup key for one profiled operator instance. stage_index
/// disambiguates repeated operators across stacks, where channel and
/// spatial configurations differ.
struct LatencyKey {
    std::string op;
    int stage = 0;
    int c_in = 0, c_out = 0;
    int h = 0, w = 0;

    auto operator<=>(const LatencyKey&) const = default;
    std::string to_string() const;
};

/// Device profile: per-operator microsecond costs plus one constant
/// overhead covering everything genotype-independent (stem, reduction
/// blocks, classifier, runtime setup).
struct LatencyTable {
    std::string device_name;
    double const_overhead_us = 0.0;
    std::map<LatencyKey, double> entries; // value: latency_us >= 0
};

/// Reads the CSV profile format:
///   op,stage,c_in,c_out,h,w,latency_us
///   __const_overhead__,0,0,0,0,0,<value>
///   <op>,<stage>,<c_in>,<c_out>,<h>,<w>,<value>
/// UTF-8, LF line endings, '.' decimal separator. Throws ParseError on
/// duplicate keys, negative or non-finite latencies, a missing overhead
/// row or any malformed row; IoError if the file cannot be read.
LatencyTable load_table(const std::string& path);

/// Writes the same format with entries sorted by key; load_table of the
/// result reproduces the table exactly.
void save_table(const LatencyTable& table, const std::string& path);

/// Keys required by (skeleton, topology, ops) but absent from the table.
/// Empty result means latency_estimate cannot fail on any genotype of
/// the space. Zero never needs an entry.
std::vector<LatencyKey> validate_coverage(const LatencyTable& table,
                                          const MacroSkeleton& skeleton,
                                          const CellTopology& topology,
                                          const std::vector<OperatorKind>& ops);

/// Deterministic synthetic profile for tests and demos: per-op costs
/// loosely proportional to the operator's arithmetic cost at each stage,
/// plus per-op fixed offsets and seeded jitter. Not measured hardware.
LatencyTable make_synthetic_table(const MacroSkeleton& skeleton,
                                  const std::vector<OperatorKind>& ops,
                                  std::uint64_t seed,
                                  const std::string& device_name = "synthetic");

} // namespace monas

#endif
