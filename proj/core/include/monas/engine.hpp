#ifndef MONAS_ENGINE_HPP
#define MONAS_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "monas/network.hpp"
#include "monas/tensor.hpp"

namespace monas {

/// Flat parameter storage in the canonical layer-then-index order fixed
/// by finalize_network. Length equals NetworkSpec::param_count.
using ParamVector = std::vector<double>;

/// One bit per ReLU unit per forward pass; 1 iff pre-activation > 0.
/// Bit order follows layer order, elements row-major within a layer, so
/// the length is identical for every input pushed through the same spec.
struct ActivationPattern {
    std::vector<std::uint64_t> words;
    std::int64_t nbits = 0;

    void resize(std::int64_t n) {
        nbits = n;
        words.assign(static_cast<std::size_t>((n + 63) / 64), 0);
    }
    void set(std::int64_t i) {
        words[static_cast<std::size_t>(i >> 6)] |= (1ULL << (i & 63));
    }
    bool get(std::int64_t i) const {
        return (words[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1ULL;
    }
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint64_t w : words) {
            h ^= w;
            h *= 1099511628211ULL;
        }
        return h;
    }
    bool operator==(const ActivationPattern& o) const = default;
};

struct ActivationPatternHash {
    std::size_t operator()(const ActivationPattern& p) const {
        return static_cast<std::size_t>(p.hash());
    }
};

struct ForwardResult {
    Tensor logits; // shape {num_classes}
    ActivationPattern pattern;
};

/// Kaiming-normal fan-in initialization for conv and linear weights,
/// zero biases, BatchNorm scale 1 / shift 0. Deterministic per seed.
ParamVector init_params(const NetworkSpec& spec, std::uint64_t seed);

/// Runs the network on one input. Throws ShapeError if x does not match
/// the spec input shape.
ForwardResult forward(const NetworkSpec& spec, const ParamVector& params, const Tensor& x);

/// Gradient of g(x) = sum of logits with respect to every parameter,
/// reverse-mode, same ordering as ParamVector. The ReLU subgradient at
/// exactly 0 is 0.
std::vector<double> param_gradient(const NetworkSpec& spec, const ParamVector& params,
                                   const Tensor& x);

} // namespace monas

#endif
