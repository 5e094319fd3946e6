#pragma once

#include <string>

#include "xews/rng.hpp"
#include "xews/tensor.hpp"

namespace xews {

enum class LayerKind {
    CausalConv1d,
    LayerNorm,
    Relu,
    SpatialDropout,
    GlobalAvgPool,
    Dense,
    Softmax,
};

std::string to_string(LayerKind k);
LayerKind layer_kind_from_string(const std::string& s);

struct LayerSpec {
    LayerKind kind = LayerKind::Relu;
    std::size_t kernel_size = 1; // conv only
    std::size_t dilation = 1;    // conv only
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    double dropout_rate = 0.0;
};

// A layer is a spec plus its parameter tensors.
//   conv:  weights K x C_in x C_out, bias C_out
//   norm:  weights = gain (C), bias = shift (C)
//   dense: weights C_in x C_out, bias C_out
// Parameter-free kinds leave both tensors empty.
struct Layer {
    LayerSpec spec;
    Tensor weights;
    Tensor bias;
};

constexpr double kLayerNormEps = 1e-5;
constexpr double kLossClamp = 1e-15;

// He normal initialization: N(0, sqrt(2/fan_in)).
Tensor he_init(Rng& rng, std::vector<std::size_t> shape, std::size_t fan_in);

// out[t,o] = bias[o] + sum_{k,c} w[k,c,o] * in[t - (K-1-k)*dilation, c],
// with zero left padding (negative time indices dropped).
Tensor causal_conv1d_forward(const Tensor& input, const Tensor& weights,
                             const Tensor& bias, std::size_t dilation);

// Per-timestep normalization over channels, then affine gain/shift.
Tensor layer_norm_forward(const Tensor& input, const Tensor& gain, const Tensor& shift);

Tensor relu(const Tensor& input);

// Training mode zeroes whole channels with probability `rate` and rescales
// survivors by 1/(1-rate); the applied per-channel factor is written to
// `mask_out` (C) for use in the backward pass. Inference mode is identity.
Tensor spatial_dropout(const Tensor& input, double rate, Rng& rng, bool training,
                       Tensor* mask_out = nullptr);

Tensor global_avg_pool(const Tensor& input);

// logits = W^T x + b;  probs = softmax(logits) with max-subtraction.
void dense_softmax_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                           Tensor& logits_out, Tensor& probs_out);

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);
Tensor softmax(const Tensor& logits);

// -ln(probs[label]) with the argument clamped at 1e-15.
double cross_entropy(const Tensor& probs, std::size_t label);

} // namespace xews
