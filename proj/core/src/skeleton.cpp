#include "monas/skeleton.hpp"

namespace monas {

void MacroSkeleton::validate() const {
    if (stem_channels < 1) throw ConfigError("stem_channels must be >= 1");
    if (num_stacks < 1) throw ConfigError("num_stacks must be >= 1");
    if (cells_per_stack < 1) throw ConfigError("cells_per_stack must be >= 1");
    if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
    if (input_shape.c < 1 || input_shape.h < 1 || input_shape.w < 1)
        throw ConfigError("input_shape dimensions must be >= 1");
}

namespace {

int strided_extent(int in) {
    // conv 3x3 stride 2 pad 1 and conv 1x1 stride 2 pad 0 both give ceil(in/2)
    return (in - 1) / 2 + 1;
}

struct Builder {
    std::vector<LayerSpec> layers;

    int add(LayerSpec l) {
        layers.push_back(std::move(l));
        return static_cast<int>(layers.size()) - 1;
    }
    int conv(int input, int k, int stride, int pad, int c_in, int c_out, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::Conv;
        l.inputs = {input};
        l.kernel = k;
        l.stride = stride;
        l.pad = pad;
        l.c_in = c_in;
        l.c_out = c_out;
        l.tag = std::move(tag);
        return add(std::move(l));
    }
    int bn(int input, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::BatchNorm;
        l.inputs = {input};
        l.tag = std::move(tag);
        return add(std::move(l));
    }
    int relu(int input, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::ReLU;
        l.inputs = {input};
        l.tag = std::move(tag);
        return add(std::move(l));
    }
    int avgpool(int input, int k, int stride, int pad, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::AvgPool;
        l.inputs = {input};
        l.kernel = k;
        l.stride = stride;
        l.pad = pad;
        l.tag = std::move(tag);
        return add(std::move(l));
    }
    int sum(std::vector<int> inputs, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::Sum;
        l.inputs = std::move(inputs);
        l.tag = std::move(tag);
        return add(std::move(l));
    }
    int zero(int input, std::string tag) {
        LayerSpec l;
        l.kind = LayerKind::Zero;
        l.inputs = {input};
        l.tag = std::move(tag);
        return add(std::move(l));
    }

    /// ReLU -> Conv -> BN, the structure behind both nor_conv operators.
    int relu_conv_bn(int input, int k, int stride, int pad, int c_in, int c_out,
                     const std::string& tag) {
        int r = relu(input, tag + ".relu");
        int c = conv(r, k, stride, pad, c_in, c_out, tag + ".conv");
        return bn(c, tag + ".bn");
    }

    /// Appends one cell operator; returns the output layer index, or -1
    /// for Zero (the operator contributes nothing to the node sum).
    int cell_op(OperatorKind op, int input, int channels, const std::string& tag) {
        switch (op) {
        case OperatorKind::Zero:
            return -1;
        case OperatorKind::SkipConnect:
            return input;
        case OperatorKind::Conv1x1:
            return relu_conv_bn(input, 1, 1, 0, channels, channels, tag);
        case OperatorKind::Conv3x3:
            return relu_conv_bn(input, 3, 1, 1, channels, channels, tag);
        case OperatorKind::AvgPool3x3:
            return avgpool(input, 3, 1, 1, tag);
        }
        return -1;
    }

    /// One searched cell. Node 0 is the cell input; node j sums every
    /// non-Zero alive operator across its incoming edges.
    int cell(const SupernetMask& mask, int input, int channels, const std::string& tag) {
        const CellTopology& topo = mask.topology;
        std::vector<int> node_layer(static_cast<std::size_t>(topo.num_nodes), -1);
        node_layer[0] = input;
        for (int node = 1; node < topo.num_nodes; ++node) {
            std::vector<int> branches;
            for (int e = 0; e < topo.num_edges(); ++e) {
                const auto [src, dst] = topo.edges[e];
                if (dst != node) continue;
                for (std::size_t j = 0; j < mask.ops.size(); ++j) {
                    if (!mask.alive[static_cast<std::size_t>(e)][j]) continue;
                    const std::string op_tag = tag + ".n" + std::to_string(node) + ".e" +
                                               std::to_string(e) + ":" +
                                               std::string(operator_name(mask.ops[j]));
                    int out = cell_op(mask.ops[j], node_layer[static_cast<std::size_t>(src)],
                                      channels, op_tag);
                    if (out >= 0) branches.push_back(out);
                }
            }
            const std::string node_tag = tag + ".n" + std::to_string(node);
            if (branches.empty())
                node_layer[static_cast<std::size_t>(node)] = zero(input, node_tag + ".zero");
            else if (branches.size() == 1)
                node_layer[static_cast<std::size_t>(node)] = branches[0];
            else
                node_layer[static_cast<std::size_t>(node)] = sum(std::move(branches), node_tag + ".sum");
        }
        return node_layer[static_cast<std::size_t>(topo.num_nodes - 1)];
    }

    /// Residual downsampling block: stride-2 main path with channel
    /// doubling, stride-2 1x1 shortcut, summed.
    int reduction(int input, int c_in, const std::string& tag) {
        const int c_out = 2 * c_in;
        int a = relu(input, tag + ".relu_a");
        a = conv(a, 3, 2, 1, c_in, c_out, tag + ".conv_a");
        a = bn(a, tag + ".bn_a");
        a = relu(a, tag + ".relu_b");
        a = conv(a, 3, 1, 1, c_out, c_out, tag + ".conv_b");
        a = bn(a, tag + ".bn_b");
        int sc = conv(input, 1, 2, 0, c_in, c_out, tag + ".shortcut");
        return sum({a, sc}, tag + ".sum");
    }
};

NetworkSpec build(const MacroSkeleton& skeleton, const SupernetMask& mask) {
    skeleton.validate();
    Builder b;
    LayerSpec in;
    in.kind = LayerKind::Input;
    in.tag = "input";
    int cur = b.add(std::move(in));

    cur = b.conv(cur, 3, 1, 1, skeleton.input_shape.c, skeleton.stem_channels, "stem.conv");
    cur = b.bn(cur, "stem.bn");

    int channels = skeleton.stem_channels;
    for (int s = 0; s < skeleton.num_stacks; ++s) {
        for (int c = 0; c < skeleton.cells_per_stack; ++c) {
            cur = b.cell(mask, cur, channels,
                         "s" + std::to_string(s) + ".c" + std::to_string(c));
        }
        if (s + 1 < skeleton.num_stacks) {
            cur = b.reduction(cur, channels, "red" + std::to_string(s));
            channels *= 2;
        }
    }

    {
        LayerSpec gap;
        gap.kind = LayerKind::GlobalAvgPool;
        gap.inputs = {cur};
        gap.tag = "gap";
        cur = b.add(std::move(gap));
    }
    {
        LayerSpec fc;
        fc.kind = LayerKind::Linear;
        fc.inputs = {cur};
        fc.in_features = channels;
        fc.out_features = skeleton.num_classes;
        fc.tag = "classifier";
        b.add(std::move(fc));
    }
    return finalize_network(std::move(b.layers), skeleton.input_shape, skeleton.num_classes);
}

} // namespace

FeatureShape stage_shape(const MacroSkeleton& skeleton, int stage) {
    if (stage < 0 || stage >= skeleton.num_stacks)
        throw ConfigError("stage index out of range");
    FeatureShape s{skeleton.stem_channels, skeleton.input_shape.h, skeleton.input_shape.w};
    for (int i = 0; i < stage; ++i) {
        s.c *= 2;
        s.h = strided_extent(s.h);
        s.w = strided_extent(s.w);
    }
    return s;
}

NetworkSpec instantiate_network(const MacroSkeleton& skeleton, const CellGenotype& genotype) {
    return build(skeleton, SupernetMask::from_genotype(genotype, all_operators()));
}

NetworkSpec instantiate_network(const MacroSkeleton& skeleton, const SupernetMask& mask) {
    for (int e = 0; e < mask.topology.num_edges(); ++e)
        if (mask.alive_count(e) < 1)
            throw ConfigError("supernet mask edge has no alive operator");
    return build(skeleton, mask);
}

} // namespace monas
