#include "xews/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xews {

std::string to_string(LayerKind k) {
    switch (k) {
    case LayerKind::CausalConv1d: return "causal_conv1d";
    case LayerKind::LayerNorm: return "layer_norm";
    case LayerKind::Relu: return "relu";
    case LayerKind::SpatialDropout: return "spatial_dropout";
    case LayerKind::GlobalAvgPool: return "global_avg_pool";
    case LayerKind::Dense: return "dense";
    case LayerKind::Softmax: return "softmax";
    }
    throw std::logic_error("unknown layer kind");
}

LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "causal_conv1d") return LayerKind::CausalConv1d;
    if (s == "layer_norm") return LayerKind::LayerNorm;
    if (s == "relu") return LayerKind::Relu;
    if (s == "spatial_dropout") return LayerKind::SpatialDropout;
    if (s == "global_avg_pool") return LayerKind::GlobalAvgPool;
    if (s == "dense") return LayerKind::Dense;
    if (s == "softmax") return LayerKind::Softmax;
    throw std::invalid_argument("unknown layer kind: " + s);
}

Tensor he_init(Rng& rng, std::vector<std::size_t> shape, std::size_t fan_in) {
    if (fan_in == 0)
        throw std::invalid_argument("he_init: fan_in must be >= 1");
    Tensor t(std::move(shape));
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (double& x : t.v) x = rng.normal(0.0, stddev);
    return t;
}

Tensor causal_conv1d_forward(const Tensor& input, const Tensor& weights,
                             const Tensor& bias, std::size_t dilation) {
    const std::size_t T = input.shape[0];
    const std::size_t cin = input.shape[1];
    const std::size_t K = weights.shape[0];
    const std::size_t cout = weights.shape[2];
    if (weights.shape[1] != cin)
        throw std::invalid_argument("causal_conv1d: channel mismatch");
    if (bias.numel() != cout)
        throw std::invalid_argument("causal_conv1d: bias size mismatch");

    Tensor out({T, cout});
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < cout; ++o) out.at(t, o) = bias.at(o);
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) -
                                       static_cast<std::ptrdiff_t>((K - 1 - k) * dilation);
            if (src < 0) continue; // zero left padding
            const double* in_row = &input.v[static_cast<std::size_t>(src) * cin];
            double* out_row = &out.v[t * cout];
            for (std::size_t c = 0; c < cin; ++c) {
                const double x = in_row[c];
                if (x == 0.0) continue;
                const double* w_row = &weights.v[(k * cin + c) * cout];
                for (std::size_t o = 0; o < cout; ++o) out_row[o] += w_row[o] * x;
            }
        }
    }
    return out;
}

Tensor layer_norm_forward(const Tensor& input, const Tensor& gain, const Tensor& shift) {
    const std::size_t T = input.shape[0];
    const std::size_t C = input.shape[1];
    Tensor out({T, C});
    for (std::size_t t = 0; t < T; ++t) {
        double mean = 0.0;
        for (std::size_t c = 0; c < C; ++c) mean += input.at(t, c);
        mean /= static_cast<double>(C);
        double var = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            const double d = input.at(t, c) - mean;
            var += d * d;
        }
        var /= static_cast<double>(C);
        const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
        for (std::size_t c = 0; c < C; ++c)
            out.at(t, c) = gain.at(c) * (input.at(t, c) - mean) * inv + shift.at(c);
    }
    return out;
}

Tensor relu(const Tensor& input) {
    Tensor out = input;
    for (double& x : out.v) x = std::max(0.0, x);
    return out;
}

Tensor spatial_dropout(const Tensor& input, double rate, Rng& rng, bool training,
                       Tensor* mask_out) {
    if (rate >= 1.0)
        throw std::invalid_argument("spatial_dropout: rate must be < 1");
    const std::size_t T = input.shape[0];
    const std::size_t C = input.shape[1];
    Tensor mask({C});
    if (!training || rate == 0.0) {
        mask.fill(1.0);
        if (mask_out) *mask_out = mask;
        return input;
    }
    const double scale = 1.0 / (1.0 - rate);
    for (std::size_t c = 0; c < C; ++c)
        mask.at(c) = rng.uniform() < rate ? 0.0 : scale;
    Tensor out({T, C});
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < C; ++c)
            out.at(t, c) = input.at(t, c) * mask.at(c);
    if (mask_out) *mask_out = mask;
    return out;
}

Tensor global_avg_pool(const Tensor& input) {
    const std::size_t T = input.shape[0];
    const std::size_t C = input.shape[1];
    if (T == 0)
        throw std::invalid_argument("global_avg_pool: empty time axis");
    Tensor out({C});
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < C; ++c) out.at(c) += input.at(t, c);
    for (double& x : out.v) x /= static_cast<double>(T);
    return out;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
    const std::size_t cin = weights.shape[0];
    const std::size_t cout = weights.shape[1];
    if (input.numel() != cin)
        throw std::invalid_argument("dense: input size mismatch");
    Tensor out({cout});
    for (std::size_t o = 0; o < cout; ++o) {
        double acc = bias.at(o);
        for (std::size_t c = 0; c < cin; ++c) acc += weights.at(c, o) * input.at(c);
        out.at(o) = acc;
    }
    return out;
}

Tensor softmax(const Tensor& logits) {
    Tensor probs = logits;
    const double m = *std::max_element(logits.v.begin(), logits.v.end());
    double sum = 0.0;
    for (double& x : probs.v) {
        x = std::exp(x - m);
        sum += x;
    }
    for (double& x : probs.v) x /= sum;
    return probs;
}

void dense_softmax_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                           Tensor& logits_out, Tensor& probs_out) {
    logits_out = dense_forward(input, weights, bias);
    probs_out = softmax(logits_out);
}

double cross_entropy(const Tensor& probs, std::size_t label) {
    return -std::log(std::max(probs.at(label), kLossClamp));
}

} // namespace xews
