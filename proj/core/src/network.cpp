#include "monas/network.hpp"

namespace monas {

namespace {

int pooled_extent(int in, int kernel, int stride, int pad, const std::string& tag) {
    const int out = (in + 2 * pad - kernel) / stride + 1;
    if (in + 2 * pad < kernel || out < 1)
        throw ShapeError("spatial size underflow at layer '" + tag + "'");
    return out;
}

} // namespace

NetworkSpec finalize_network(std::vector<LayerSpec> layers, FeatureShape input_shape,
                             int num_classes) {
    if (layers.empty() || layers[0].kind != LayerKind::Input)
        throw ShapeError("layer list must start with an Input layer");

    std::int64_t offset = 0;
    std::int64_t relu_units = 0;

    for (std::size_t i = 0; i < layers.size(); ++i) {
        LayerSpec& l = layers[i];
        for (int in : l.inputs)
            if (in < 0 || static_cast<std::size_t>(in) >= i)
                throw ShapeError("layer inputs must reference earlier layers");

        auto in_shape = [&](std::size_t which = 0) -> const FeatureShape& {
            if (l.inputs.size() <= which)
                throw ShapeError("layer '" + l.tag + "' is missing an input");
            return layers[static_cast<std::size_t>(l.inputs[which])].out_shape;
        };

        l.param_offset = offset;
        l.param_count = 0;

        switch (l.kind) {
        case LayerKind::Input:
            if (i != 0) throw ShapeError("Input layer must be first");
            l.out_shape = input_shape;
            break;
        case LayerKind::Conv: {
            const FeatureShape& s = in_shape();
            if (s.c != l.c_in)
                throw ShapeError("conv channel mismatch at layer '" + l.tag + "'");
            l.out_shape = {l.c_out,
                           pooled_extent(s.h, l.kernel, l.stride, l.pad, l.tag),
                           pooled_extent(s.w, l.kernel, l.stride, l.pad, l.tag)};
            l.param_count = static_cast<std::int64_t>(l.c_out) * l.c_in * l.kernel * l.kernel;
            break;
        }
        case LayerKind::BatchNorm:
            l.out_shape = in_shape();
            l.param_count = 2LL * l.out_shape.c; // gamma, beta
            break;
        case LayerKind::ReLU:
            l.out_shape = in_shape();
            relu_units += l.out_shape.numel();
            break;
        case LayerKind::AvgPool: {
            const FeatureShape& s = in_shape();
            l.out_shape = {s.c,
                           pooled_extent(s.h, l.kernel, l.stride, l.pad, l.tag),
                           pooled_extent(s.w, l.kernel, l.stride, l.pad, l.tag)};
            break;
        }
        case LayerKind::GlobalAvgPool:
            l.out_shape = {in_shape().c, 1, 1};
            break;
        case LayerKind::Linear: {
            const FeatureShape& s = in_shape();
            if (s.numel() != l.in_features)
                throw ShapeError("linear input size mismatch at layer '" + l.tag + "'");
            l.out_shape = {l.out_features, 1, 1};
            l.param_count = static_cast<std::int64_t>(l.out_features) * l.in_features +
                            l.out_features;
            break;
        }
        case LayerKind::Sum: {
            if (l.inputs.size() < 2)
                throw ShapeError("Sum layer needs >= 2 inputs at '" + l.tag + "'");
            l.out_shape = in_shape();
            for (std::size_t b = 1; b < l.inputs.size(); ++b)
                if (!(in_shape(b) == l.out_shape))
                    throw ShapeError("Sum branch shape mismatch at '" + l.tag + "'");
            break;
        }
        case LayerKind::Zero:
            l.out_shape = in_shape();
            break;
        }
        offset += l.param_count;
    }

    if (layers.back().out_shape.numel() != num_classes)
        throw ShapeError("final layer must produce num_classes values");

    NetworkSpec spec;
    spec.layers = std::move(layers);
    spec.input_shape = input_shape;
    spec.num_classes = num_classes;
    spec.param_count = offset;
    spec.relu_units = relu_units;
    return spec;
}

} // namespace monas
