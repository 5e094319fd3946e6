#pragma once

#include <optional>
#include <vector>

#include "xews/layers.hpp"

namespace xews {

// Ordered layer stack. The TCN is one instance; small ad hoc stacks are used
// by tests and the explanation engine's oracle checks.
struct Network {
    std::vector<Layer> layers;
};

// Everything the backward passes (gradient and relevance) need from one
// forward evaluation: the input seen by each layer, dropout masks, and the
// final logits/probs when the stack ends in dense+softmax.
struct ForwardTrace {
    std::vector<Tensor> inputs;        // inputs[i] feeds layers[i]
    std::vector<Tensor> dropout_masks; // per layer; empty unless dropout
    Tensor output;                     // output of the last layer
    Tensor logits;                     // populated when a Softmax layer ran
};

ForwardTrace network_forward(const Network& net, const Tensor& input, bool training,
                             Rng* rng = nullptr);

struct Gradients {
    std::vector<Tensor> weights; // aligned with net.layers
    std::vector<Tensor> bias;

    static Gradients zeros_like(const Network& net);
    void accumulate(const Gradients& other);
    void scale(double s);
};

// Gradient of `weight * cross_entropy(probs, label)` with respect to every
// parameter, using the cached trace. The stack must end in dense+softmax.
Gradients network_backward(const Network& net, const ForwardTrace& trace,
                           std::size_t label, double weight = 1.0);

struct AdamState {
    std::size_t step = 0;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<Tensor> first_moment;  // aligned with net.layers (weights)
    std::vector<Tensor> second_moment;
    std::vector<Tensor> first_moment_bias;
    std::vector<Tensor> second_moment_bias;

    static AdamState init(const Network& net, double learning_rate);
};

// Standard Adam update with bias correction, applied in place.
void adam_step(Network& net, const Gradients& grads, AdamState& state);

} // namespace xews
