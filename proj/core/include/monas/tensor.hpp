#ifndef MONAS_TENSOR_HPP
#define MONAS_TENSOR_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "monas/errors.hpp"

namespace monas {

/// Dense row-major tensor of 64-bit reals. All indicator math runs in
/// double; condition numbers amplify rounding and eigenvalue ratios are
/// unstable at 32-bit.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<std::size_t>(numel(shape)), 0.0);
    }
    Tensor(std::vector<int> s, std::vector<double> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (static_cast<std::int64_t>(data.size()) != numel(shape))
            throw ShapeError("tensor data length does not match shape");
    }

    static std::int64_t numel(const std::vector<int>& s) {
        std::int64_t n = 1;
        for (int d : s) {
            if (d < 1) throw ShapeError("tensor dimension < 1");
            n *= d;
        }
        return n;
    }

    std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }

    // CHW accessors for feature maps.
    double& at(int c, int h, int w, int H, int W) {
        return data[static_cast<std::size_t>((c * H + h) * W + w)];
    }
    double at(int c, int h, int w, int H, int W) const {
        return data[static_cast<std::size_t>((c * H + h) * W + w)];
    }

    bool operator==(const Tensor& o) const = default;
};

} // namespace monas

#endif
