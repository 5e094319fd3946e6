#include "xews/network.hpp"

#include <cmath>
#include <stdexcept>

namespace xews {

ForwardTrace network_forward(const Network& net, const Tensor& input, bool training,
                             Rng* rng) {
    ForwardTrace trace;
    trace.inputs.reserve(net.layers.size());
    trace.dropout_masks.resize(net.layers.size());
    Tensor cur = input;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const Layer& layer = net.layers[i];
        trace.inputs.push_back(cur);
        switch (layer.spec.kind) {
        case LayerKind::CausalConv1d:
            cur = causal_conv1d_forward(cur, layer.weights, layer.bias, layer.spec.dilation);
            break;
        case LayerKind::LayerNorm:
            cur = layer_norm_forward(cur, layer.weights, layer.bias);
            break;
        case LayerKind::Relu:
            cur = relu(cur);
            break;
        case LayerKind::SpatialDropout: {
            if (training && !rng)
                throw std::logic_error("dropout in training mode needs an rng");
            Rng dummy(0);
            cur = spatial_dropout(cur, layer.spec.dropout_rate, rng ? *rng : dummy,
                                  training, &trace.dropout_masks[i]);
            break;
        }
        case LayerKind::GlobalAvgPool:
            cur = global_avg_pool(cur);
            break;
        case LayerKind::Dense:
            cur = dense_forward(cur, layer.weights, layer.bias);
            break;
        case LayerKind::Softmax:
            trace.logits = cur;
            cur = softmax(cur);
            break;
        }
    }
    trace.output = cur;
    return trace;
}

Gradients Gradients::zeros_like(const Network& net) {
    Gradients g;
    g.weights.reserve(net.layers.size());
    g.bias.reserve(net.layers.size());
    for (const Layer& l : net.layers) {
        g.weights.emplace_back(l.weights.shape);
        g.bias.emplace_back(l.bias.shape);
    }
    return g;
}

void Gradients::accumulate(const Gradients& other) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
        for (std::size_t j = 0; j < weights[i].numel(); ++j)
            weights[i].v[j] += other.weights[i].v[j];
        for (std::size_t j = 0; j < bias[i].numel(); ++j)
            bias[i].v[j] += other.bias[i].v[j];
    }
}

void Gradients::scale(double s) {
    for (Tensor& t : weights)
        for (double& x : t.v) x *= s;
    for (Tensor& t : bias)
        for (double& x : t.v) x *= s;
}

namespace {

Tensor conv_backward(const Layer& layer, const Tensor& input, const Tensor& d_out,
                     Tensor& d_w, Tensor& d_b) {
    const std::size_t T = input.shape[0];
    const std::size_t cin = input.shape[1];
    const std::size_t K = layer.spec.kernel_size;
    const std::size_t cout = layer.weights.shape[2];
    const std::size_t dil = layer.spec.dilation;

    Tensor d_in({T, cin});
    for (std::size_t t = 0; t < T; ++t) {
        const double* dout_row = &d_out.v[t * cout];
        for (std::size_t o = 0; o < cout; ++o) d_b.at(o) += dout_row[o];
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t src =
                static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>((K - 1 - k) * dil);
            if (src < 0) continue;
            const double* in_row = &input.v[static_cast<std::size_t>(src) * cin];
            double* din_row = &d_in.v[static_cast<std::size_t>(src) * cin];
            for (std::size_t c = 0; c < cin; ++c) {
                const double* w_row = &layer.weights.v[(k * cin + c) * cout];
                double* dw_row = &d_w.v[(k * cin + c) * cout];
                double acc = 0.0;
                const double x = in_row[c];
                for (std::size_t o = 0; o < cout; ++o) {
                    acc += w_row[o] * dout_row[o];
                    dw_row[o] += x * dout_row[o];
                }
                din_row[c] += acc;
            }
        }
    }
    return d_in;
}

Tensor layer_norm_backward(const Layer& layer, const Tensor& input, const Tensor& d_out,
                           Tensor& d_gain, Tensor& d_shift) {
    const std::size_t T = input.shape[0];
    const std::size_t C = input.shape[1];
    const double cn = static_cast<double>(C);
    Tensor d_in({T, C});
    for (std::size_t t = 0; t < T; ++t) {
        double mean = 0.0;
        for (std::size_t c = 0; c < C; ++c) mean += input.at(t, c);
        mean /= cn;
        double var = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            const double d = input.at(t, c) - mean;
            var += d * d;
        }
        var /= cn;
        const double inv = 1.0 / std::sqrt(var + kLayerNormEps);

        double sum_g = 0.0;   // mean of gain*dy
        double sum_gx = 0.0;  // mean of gain*dy*xhat
        for (std::size_t c = 0; c < C; ++c) {
            const double xhat = (input.at(t, c) - mean) * inv;
            const double gdy = layer.weights.at(c) * d_out.at(t, c);
            sum_g += gdy;
            sum_gx += gdy * xhat;
            d_gain.at(c) += d_out.at(t, c) * xhat;
            d_shift.at(c) += d_out.at(t, c);
        }
        sum_g /= cn;
        sum_gx /= cn;
        for (std::size_t c = 0; c < C; ++c) {
            const double xhat = (input.at(t, c) - mean) * inv;
            const double gdy = layer.weights.at(c) * d_out.at(t, c);
            d_in.at(t, c) = (gdy - sum_g - xhat * sum_gx) * inv;
        }
    }
    return d_in;
}

} // namespace

Gradients network_backward(const Network& net, const ForwardTrace& trace,
                           std::size_t label, double weight) {
    if (trace.inputs.size() != net.layers.size())
        throw std::logic_error("network_backward: trace does not match network");
    if (net.layers.empty() || net.layers.back().spec.kind != LayerKind::Softmax)
        throw std::logic_error("network_backward: stack must end in softmax");

    Gradients grads = Gradients::zeros_like(net);

    // Combined softmax + cross-entropy gradient w.r.t. logits.
    Tensor delta = trace.output;
    delta.at(label) -= 1.0;
    for (double& x : delta.v) x *= weight;

    for (std::size_t idx = net.layers.size() - 1; idx-- > 0;) {
        const Layer& layer = net.layers[idx];
        const Tensor& in = trace.inputs[idx];
        switch (layer.spec.kind) {
        case LayerKind::Dense: {
            const std::size_t cin = layer.weights.shape[0];
            const std::size_t cout = layer.weights.shape[1];
            Tensor d_in({cin});
            for (std::size_t c = 0; c < cin; ++c) {
                double acc = 0.0;
                for (std::size_t o = 0; o < cout; ++o) {
                    acc += layer.weights.at(c, o) * delta.at(o);
                    grads.weights[idx].at(c, o) += in.at(c) * delta.at(o);
                }
                d_in.at(c) = acc;
            }
            for (std::size_t o = 0; o < cout; ++o) grads.bias[idx].at(o) += delta.at(o);
            delta = std::move(d_in);
            break;
        }
        case LayerKind::GlobalAvgPool: {
            const std::size_t T = in.shape[0];
            const std::size_t C = in.shape[1];
            Tensor d_in({T, C});
            const double invT = 1.0 / static_cast<double>(T);
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t c = 0; c < C; ++c) d_in.at(t, c) = delta.at(c) * invT;
            delta = std::move(d_in);
            break;
        }
        case LayerKind::Relu: {
            for (std::size_t j = 0; j < delta.numel(); ++j)
                if (in.v[j] <= 0.0) delta.v[j] = 0.0;
            break;
        }
        case LayerKind::SpatialDropout: {
            const Tensor& mask = trace.dropout_masks[idx];
            if (mask.numel() > 0) {
                const std::size_t C = mask.numel();
                for (std::size_t j = 0; j < delta.numel(); ++j) delta.v[j] *= mask.v[j % C];
            }
            break;
        }
        case LayerKind::LayerNorm:
            delta = layer_norm_backward(layer, in, delta, grads.weights[idx], grads.bias[idx]);
            break;
        case LayerKind::CausalConv1d:
            delta = conv_backward(layer, in, delta, grads.weights[idx], grads.bias[idx]);
            break;
        case LayerKind::Softmax:
            throw std::logic_error("network_backward: softmax must be the last layer");
        }
    }
    return grads;
}

AdamState AdamState::init(const Network& net, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    for (const Layer& l : net.layers) {
        s.first_moment.emplace_back(l.weights.shape);
        s.second_moment.emplace_back(l.weights.shape);
        s.first_moment_bias.emplace_back(l.bias.shape);
        s.second_moment_bias.emplace_back(l.bias.shape);
    }
    return s;
}

namespace {

void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
                 const AdamState& s, double bc1, double bc2) {
    for (std::size_t j = 0; j < param.numel(); ++j) {
        m.v[j] = s.beta1 * m.v[j] + (1.0 - s.beta1) * grad.v[j];
        v.v[j] = s.beta2 * v.v[j] + (1.0 - s.beta2) * grad.v[j] * grad.v[j];
        const double mhat = m.v[j] / bc1;
        const double vhat = v.v[j] / bc2;
        param.v[j] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

} // namespace

void adam_step(Network& net, const Gradients& grads, AdamState& state) {
    if (grads.weights.size() != net.layers.size())
        throw std::invalid_argument("adam_step: gradient/parameter mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (!net.layers[i].weights.same_shape(grads.weights[i]) ||
            !net.layers[i].bias.same_shape(grads.bias[i]))
            throw std::invalid_argument("adam_step: shape mismatch");
        adam_update(net.layers[i].weights, grads.weights[i], state.first_moment[i],
                    state.second_moment[i], state, bc1, bc2);
        adam_update(net.layers[i].bias, grads.bias[i], state.first_moment_bias[i],
                    state.second_moment_bias[i], state, bc1, bc2);
    }
}

} // namespace xews
