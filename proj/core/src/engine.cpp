#include "monas/engine.hpp"

#include <algorithm>
#include <cmath>

#include "monas/rng.hpp"

namespace monas {

namespace {

Tensor make_feature(const FeatureShape& s) {
    return Tensor({s.c, s.h, s.w});
}

// out[oc,oy,ox] += W[oc,ic,ky,kx] * in[ic, oy*s-p+ky, ox*s-p+kx]
// Loops run per filter tap with hoisted valid output ranges, keeping the
// innermost loop contiguous in both tensors for stride 1.
void conv_forward(const LayerSpec& l, const double* w, const Tensor& in, Tensor& out) {
    const int H = in.shape[1], W = in.shape[2];
    const int OH = out.shape[1], OW = out.shape[2];
    const int k = l.kernel, s = l.stride, p = l.pad;
    for (int oc = 0; oc < l.c_out; ++oc) {
        double* out_c = out.data.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ic = 0; ic < l.c_in; ++ic) {
            const double* in_c = in.data.data() + static_cast<std::size_t>(ic) * H * W;
            const double* w_f = w + (static_cast<std::size_t>(oc) * l.c_in + ic) * k * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wv = w_f[ky * k + kx];
                    for (int oy = 0; oy < OH; ++oy) {
                        const int iy = oy * s - p + ky;
                        if (iy < 0 || iy >= H) continue;
                        const double* in_row = in_c + static_cast<std::size_t>(iy) * W;
                        double* out_row = out_c + static_cast<std::size_t>(oy) * OW;
                        for (int ox = 0; ox < OW; ++ox) {
                            const int ix = ox * s - p + kx;
                            if (ix < 0 || ix >= W) continue;
                            out_row[ox] += wv * in_row[ix];
                        }
                    }
                }
            }
        }
    }
}

void conv_backward(const LayerSpec& l, const double* w, const Tensor& in,
                   const Tensor& dout, Tensor& din, double* dw) {
    const int H = in.shape[1], W = in.shape[2];
    const int OH = dout.shape[1], OW = dout.shape[2];
    const int k = l.kernel, s = l.stride, p = l.pad;
    for (int oc = 0; oc < l.c_out; ++oc) {
        const double* dout_c = dout.data.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ic = 0; ic < l.c_in; ++ic) {
            const double* in_c = in.data.data() + static_cast<std::size_t>(ic) * H * W;
            double* din_c = din.data.data() + static_cast<std::size_t>(ic) * H * W;
            const double* w_f = w + (static_cast<std::size_t>(oc) * l.c_in + ic) * k * k;
            double* dw_f = dw + (static_cast<std::size_t>(oc) * l.c_in + ic) * k * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wv = w_f[ky * k + kx];
                    double acc = 0.0;
                    for (int oy = 0; oy < OH; ++oy) {
                        const int iy = oy * s - p + ky;
                        if (iy < 0 || iy >= H) continue;
                        const double* in_row = in_c + static_cast<std::size_t>(iy) * W;
                        double* din_row = din_c + static_cast<std::size_t>(iy) * W;
                        const double* dout_row = dout_c + static_cast<std::size_t>(oy) * OW;
                        for (int ox = 0; ox < OW; ++ox) {
                            const int ix = ox * s - p + kx;
                            if (ix < 0 || ix >= W) continue;
                            acc += dout_row[ox] * in_row[ix];
                            din_row[ix] += wv * dout_row[ox];
                        }
                    }
                    dw_f[ky * k + kx] += acc;
                }
            }
        }
    }
}

void avgpool_forward(const LayerSpec& l, const Tensor& in, Tensor& out) {
    const int C = in.shape[0], H = in.shape[1], W = in.shape[2];
    const int OH = out.shape[1], OW = out.shape[2];
    const double inv = 1.0 / (l.kernel * l.kernel);
    for (int c = 0; c < C; ++c)
        for (int oy = 0; oy < OH; ++oy)
            for (int ox = 0; ox < OW; ++ox) {
                double acc = 0.0;
                for (int ky = 0; ky < l.kernel; ++ky) {
                    const int iy = oy * l.stride - l.pad + ky;
                    if (iy < 0 || iy >= H) continue;
                    for (int kx = 0; kx < l.kernel; ++kx) {
                        const int ix = ox * l.stride - l.pad + kx;
                        if (ix < 0 || ix >= W) continue;
                        acc += in.at(c, iy, ix, H, W);
                    }
                }
                out.at(c, oy, ox, OH, OW) = acc * inv;
            }
}

void avgpool_backward(const LayerSpec& l, const Tensor& dout, Tensor& din) {
    const int C = din.shape[0], H = din.shape[1], W = din.shape[2];
    const int OH = dout.shape[1], OW = dout.shape[2];
    const double inv = 1.0 / (l.kernel * l.kernel);
    for (int c = 0; c < C; ++c)
        for (int oy = 0; oy < OH; ++oy)
            for (int ox = 0; ox < OW; ++ox) {
                const double g = dout.at(c, oy, ox, OH, OW) * inv;
                for (int ky = 0; ky < l.kernel; ++ky) {
                    const int iy = oy * l.stride - l.pad + ky;
                    if (iy < 0 || iy >= H) continue;
                    for (int kx = 0; kx < l.kernel; ++kx) {
                        const int ix = ox * l.stride - l.pad + kx;
                        if (ix < 0 || ix >= W) continue;
                        din.at(c, iy, ix, H, W) += g;
                    }
                }
            }
}

void run_forward(const NetworkSpec& spec, const ParamVector& params, const Tensor& x,
                 std::vector<Tensor>& outs, ActivationPattern* pattern) {
    if (static_cast<std::int64_t>(params.size()) != spec.param_count)
        throw ShapeError("parameter vector length does not match spec");
    if (x.shape.size() != 3 || x.shape[0] != spec.input_shape.c ||
        x.shape[1] != spec.input_shape.h || x.shape[2] != spec.input_shape.w)
        throw ShapeError("input tensor shape does not match spec input");

    if (pattern) pattern->resize(spec.relu_units);
    std::int64_t bit_cursor = 0;

    outs.clear();
    outs.reserve(spec.layers.size());
    for (const LayerSpec& l : spec.layers) {
        switch (l.kind) {
        case LayerKind::Input:
            outs.push_back(x);
            break;
        case LayerKind::Conv: {
            Tensor out = make_feature(l.out_shape);
            conv_forward(l, params.data() + l.param_offset,
                         outs[static_cast<std::size_t>(l.inputs[0])], out);
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::BatchNorm: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor out = make_feature(l.out_shape);
            const double* gamma = params.data() + l.param_offset;
            const double* beta = gamma + l.out_shape.c;
            const std::int64_t hw = static_cast<std::int64_t>(l.out_shape.h) * l.out_shape.w;
            for (int c = 0; c < l.out_shape.c; ++c)
                for (std::int64_t i = 0; i < hw; ++i)
                    out.data[static_cast<std::size_t>(c * hw + i)] =
                        gamma[c] * in.data[static_cast<std::size_t>(c * hw + i)] + beta[c];
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::ReLU: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor out = make_feature(l.out_shape);
            for (std::size_t i = 0; i < in.data.size(); ++i) {
                const bool alive = in.data[i] > 0.0;
                out.data[i] = alive ? in.data[i] : 0.0;
                if (pattern && alive) pattern->set(bit_cursor + static_cast<std::int64_t>(i));
            }
            bit_cursor += static_cast<std::int64_t>(in.data.size());
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::AvgPool: {
            Tensor out = make_feature(l.out_shape);
            avgpool_forward(l, outs[static_cast<std::size_t>(l.inputs[0])], out);
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::GlobalAvgPool: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor out = make_feature(l.out_shape);
            const int C = in.shape[0];
            const std::int64_t hw = static_cast<std::int64_t>(in.shape[1]) * in.shape[2];
            for (int c = 0; c < C; ++c) {
                double acc = 0.0;
                for (std::int64_t i = 0; i < hw; ++i)
                    acc += in.data[static_cast<std::size_t>(c * hw + i)];
                out.data[static_cast<std::size_t>(c)] = acc / static_cast<double>(hw);
            }
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::Linear: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor out = make_feature(l.out_shape);
            const double* w = params.data() + l.param_offset;
            const double* bias = w + static_cast<std::size_t>(l.out_features) * l.in_features;
            for (int o = 0; o < l.out_features; ++o) {
                double acc = bias[o];
                const double* w_row = w + static_cast<std::size_t>(o) * l.in_features;
                for (int i = 0; i < l.in_features; ++i) acc += w_row[i] * in.data[static_cast<std::size_t>(i)];
                out.data[static_cast<std::size_t>(o)] = acc;
            }
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::Sum: {
            Tensor out = outs[static_cast<std::size_t>(l.inputs[0])];
            for (std::size_t b = 1; b < l.inputs.size(); ++b) {
                const Tensor& in = outs[static_cast<std::size_t>(l.inputs[b])];
                for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += in.data[i];
            }
            outs.push_back(std::move(out));
            break;
        }
        case LayerKind::Zero:
            outs.push_back(make_feature(l.out_shape));
            break;
        }
    }
}

} // namespace

ParamVector init_params(const NetworkSpec& spec, std::uint64_t seed) {
    ParamVector params(static_cast<std::size_t>(spec.param_count), 0.0);
    Rng rng(seed);
    for (const LayerSpec& l : spec.layers) {
        double* p = params.data() + l.param_offset;
        switch (l.kind) {
        case LayerKind::Conv: {
            const double std_dev = std::sqrt(2.0 / (static_cast<double>(l.c_in) * l.kernel * l.kernel));
            for (std::int64_t i = 0; i < l.param_count; ++i) p[i] = std_dev * rng.next_normal();
            break;
        }
        case LayerKind::BatchNorm:
            for (int c = 0; c < l.out_shape.c; ++c) p[c] = 1.0; // gamma
            // beta stays 0
            break;
        case LayerKind::Linear: {
            const double std_dev = std::sqrt(2.0 / static_cast<double>(l.in_features));
            const std::int64_t nw = static_cast<std::int64_t>(l.out_features) * l.in_features;
            for (std::int64_t i = 0; i < nw; ++i) p[i] = std_dev * rng.next_normal();
            // bias stays 0
            break;
        }
        default:
            break;
        }
    }
    return params;
}

ForwardResult forward(const NetworkSpec& spec, const ParamVector& params, const Tensor& x) {
    std::vector<Tensor> outs;
    ForwardResult res;
    run_forward(spec, params, x, outs, &res.pattern);
    const Tensor& last = outs.back();
    res.logits = Tensor({spec.num_classes});
    res.logits.data = last.data;
    return res;
}

std::vector<double> param_gradient(const NetworkSpec& spec, const ParamVector& params,
                                   const Tensor& x) {
    std::vector<Tensor> outs;
    run_forward(spec, params, x, outs, nullptr);

    std::vector<double> grad(static_cast<std::size_t>(spec.param_count), 0.0);
    std::vector<Tensor> douts(spec.layers.size());
    for (std::size_t i = 0; i < spec.layers.size(); ++i)
        douts[i] = make_feature(spec.layers[i].out_shape);

    // d g / d logits = 1 for the scalar reduction g(x) = sum_k logits_k
    std::fill(douts.back().data.begin(), douts.back().data.end(), 1.0);

    for (std::size_t li = spec.layers.size(); li-- > 0;) {
        const LayerSpec& l = spec.layers[li];
        const Tensor& dout = douts[li];
        switch (l.kind) {
        case LayerKind::Input:
        case LayerKind::Zero:
            break;
        case LayerKind::Conv:
            conv_backward(l, params.data() + l.param_offset,
                          outs[static_cast<std::size_t>(l.inputs[0])], dout,
                          douts[static_cast<std::size_t>(l.inputs[0])],
                          grad.data() + l.param_offset);
            break;
        case LayerKind::BatchNorm: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor& din = douts[static_cast<std::size_t>(l.inputs[0])];
            const double* gamma = params.data() + l.param_offset;
            double* dgamma = grad.data() + l.param_offset;
            double* dbeta = dgamma + l.out_shape.c;
            const std::int64_t hw = static_cast<std::int64_t>(l.out_shape.h) * l.out_shape.w;
            for (int c = 0; c < l.out_shape.c; ++c) {
                double dg = 0.0, db = 0.0;
                for (std::int64_t i = 0; i < hw; ++i) {
                    const std::size_t idx = static_cast<std::size_t>(c * hw + i);
                    dg += dout.data[idx] * in.data[idx];
                    db += dout.data[idx];
                    din.data[idx] += gamma[c] * dout.data[idx];
                }
                dgamma[c] += dg;
                dbeta[c] += db;
            }
            break;
        }
        case LayerKind::ReLU: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor& din = douts[static_cast<std::size_t>(l.inputs[0])];
            for (std::size_t i = 0; i < in.data.size(); ++i)
                if (in.data[i] > 0.0) din.data[i] += dout.data[i];
            break;
        }
        case LayerKind::AvgPool:
            avgpool_backward(l, dout, douts[static_cast<std::size_t>(l.inputs[0])]);
            break;
        case LayerKind::GlobalAvgPool: {
            Tensor& din = douts[static_cast<std::size_t>(l.inputs[0])];
            const int C = din.shape[0];
            const std::int64_t hw = static_cast<std::int64_t>(din.shape[1]) * din.shape[2];
            for (int c = 0; c < C; ++c) {
                const double g = dout.data[static_cast<std::size_t>(c)] / static_cast<double>(hw);
                for (std::int64_t i = 0; i < hw; ++i)
                    din.data[static_cast<std::size_t>(c * hw + i)] += g;
            }
            break;
        }
        case LayerKind::Linear: {
            const Tensor& in = outs[static_cast<std::size_t>(l.inputs[0])];
            Tensor& din = douts[static_cast<std::size_t>(l.inputs[0])];
            const double* w = params.data() + l.param_offset;
            double* dw = grad.data() + l.param_offset;
            double* dbias = dw + static_cast<std::size_t>(l.out_features) * l.in_features;
            for (int o = 0; o < l.out_features; ++o) {
                const double g = dout.data[static_cast<std::size_t>(o)];
                const double* w_row = w + static_cast<std::size_t>(o) * l.in_features;
                double* dw_row = dw + static_cast<std::size_t>(o) * l.in_features;
                for (int i = 0; i < l.in_features; ++i) {
                    dw_row[i] += g * in.data[static_cast<std::size_t>(i)];
                    din.data[static_cast<std::size_t>(i)] += g * w_row[i];
                }
                dbias[o] += g;
            }
            break;
        }
        case LayerKind::Sum:
            for (int input : l.inputs) {
                Tensor& din = douts[static_cast<std::size_t>(input)];
                for (std::size_t i = 0; i < din.data.size(); ++i)
                    din.data[i] += dout.data[i];
            }
            break;
        }
    }
    return grad;
}

} // namespace monas
