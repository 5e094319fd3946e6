#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace xews {

// Dense row-major tensor of doubles. All network math runs on these.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> v;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        v.assign(numel_of(shape), 0.0);
    }

    Tensor(std::vector<std::size_t> s, std::vector<double> values)
        : shape(std::move(s)), v(std::move(values)) {
        if (v.size() != numel_of(shape))
            throw std::invalid_argument("tensor: shape/value size mismatch");
    }

    static std::size_t numel_of(const std::vector<std::size_t>& s) {
        return std::accumulate(s.begin(), s.end(), std::size_t{1},
                               [](std::size_t a, std::size_t b) { return a * b; });
    }

    std::size_t numel() const { return v.size(); }

    double& at(std::size_t i) { return v[i]; }
    double at(std::size_t i) const { return v[i]; }

    double& at(std::size_t i, std::size_t j) { return v[i * shape[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return v[i * shape[1] + j]; }

    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return v[(i * shape[1] + j) * shape[2] + k];
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return v[(i * shape[1] + j) * shape[2] + k];
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

} // namespace xews
