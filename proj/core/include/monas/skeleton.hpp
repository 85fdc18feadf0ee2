#ifndef MONAS_SKELETON_HPP
#define MONAS_SKELETON_HPP

#include "monas/genotype.hpp"
#include "monas/network.hpp"

namespace monas {

/// The fixed outer network around the searched cells: stem conv+BN, then
/// `num_stacks` stacks of `cells_per_stack` cells separated by residual
/// downsampling blocks (stride 2, channel doubling), then global average
/// pool and a linear classifier. Channel width doubles and spatial size
/// halves at each reduction.
struct MacroSkeleton {
    int stem_channels = 16;
    int num_stacks = 3;
    int cells_per_stack = 1;
    int num_classes = 10;
    FeatureShape input_shape{3, 8, 8};

    void validate() const;
};

/// Channel count and spatial size seen by cells of stack `stage`.
FeatureShape stage_shape(const MacroSkeleton& skeleton, int stage);

/// Builds the flat layer graph for a single-path cell repeated through
/// the skeleton. Pure function: identical arguments give an identical
/// NetworkSpec. Throws ShapeError on spatial underflow.
NetworkSpec instantiate_network(const MacroSkeleton& skeleton, const CellGenotype& genotype);

/// Supernet variant: an edge with several alive operators contributes the
/// elementwise sum of their outputs. Zero operators emit nothing; a node
/// whose incoming operators are all Zero becomes an explicit zero tensor,
/// which keeps shapes consistent and makes Zero free in FLOPs and latency.
NetworkSpec instantiate_network(const MacroSkeleton& skeleton, const SupernetMask& mask);

} // namespace monas

#endif
