#ifndef MONAS_NETWORK_HPP
#define MONAS_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "monas/tensor.hpp"

namespace monas {

enum class LayerKind : int {
    Input = 0,
    Conv,          // no bias; always followed by BatchNorm in this engine except shortcuts
    BatchNorm,     // affine per-channel scale/shift; no batch statistics
    ReLU,
    AvgPool,       // count_include_pad semantics, divides by k*k
    GlobalAvgPool,
    Linear,        // weight + bias
    Sum,           // elementwise sum of all inputs
    Zero,          // emits a zero tensor shaped like its input
};

struct FeatureShape {
    int c = 0, h = 0, w = 0;
    std::int64_t numel() const {
        return static_cast<std::int64_t>(c) * h * w;
    }
    bool operator==(const FeatureShape& o) const = default;
};

/// One node of the flat layer graph. `inputs` are indices of earlier
/// layers, so the list is a topologically ordered SSA form; branch-and-
/// merge structure (cell edges, residual shortcuts) is expressed through
/// Sum layers with several inputs.
struct LayerSpec {
    LayerKind kind = LayerKind::Input;
    std::vector<int> inputs;
    int kernel = 0, stride = 1, pad = 0; // Conv / AvgPool
    int c_in = 0, c_out = 0;             // Conv
    int in_features = 0, out_features = 0; // Linear
    FeatureShape out_shape;
    std::int64_t param_offset = 0;
    std::int64_t param_count = 0;
    std::string tag; // stable human-readable position, e.g. "s1.c0.n3.e2:nor_conv_3x3.conv"

    bool operator==(const LayerSpec& o) const = default;
};

struct NetworkSpec {
    std::vector<LayerSpec> layers; // layers[0] is the Input layer
    FeatureShape input_shape;
    int num_classes = 0;
    std::int64_t param_count = 0;  // sum of all layer param counts
    std::int64_t relu_units = 0;   // activation-pattern bits per forward pass

    bool operator==(const NetworkSpec& o) const = default;
};

/// Runs shape inference over `layers` (front to back), assigns parameter
/// offsets in canonical layer-then-index order and fills the aggregate
/// counts. Throws ShapeError on inconsistent wiring, mismatched Sum
/// inputs, or spatial size underflow.
NetworkSpec finalize_network(std::vector<LayerSpec> layers, FeatureShape input_shape,
                             int num_classes);

} // namespace monas

#endif
