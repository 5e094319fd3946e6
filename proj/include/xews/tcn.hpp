#pragma once

#include <string>
#include <vector>

#include "xews/grid.hpp"
#include "xews/network.hpp"

namespace xews {

struct TcnConfig {
    std::size_t n_timesteps = 24;
    std::size_t n_features = 34;
    std::size_t n_blocks = 3;
    std::size_t filters = 64;
    std::size_t kernel_size = 3;
    std::vector<std::size_t> dilations = {1, 2, 4}; // one per block
    std::size_t convs_per_block = 2;
    double dropout_rate = 0.10;
    double learning_rate = 0.001;
    std::size_t batch_size = 200;
    std::size_t max_epochs = 200;
    std::size_t patience = 10;
    std::uint64_t seed = 1;

    // 1 + convs_per_block * (kernel_size - 1) * sum(dilations).
    std::size_t receptive_field() const;
};

// The trained model: layer stack per the block structure
// [conv -> relu -> dropout -> norm] x convs_per_block, x n_blocks,
// then global average pool, dense, softmax. Class 1 is the positive class.
struct TcnNetwork {
    Network net;
    TcnConfig config;
};

// He-initialized network; throws when receptive_field() < n_timesteps.
TcnNetwork build_network(const TcnConfig& config, Rng& rng);

std::size_t parameter_count(const TcnNetwork& net);

// Probability of the positive class. Values must already be scaled to [0,1].
// When `trace_out` is given the full activation trace is written there for
// the explanation backward pass.
double tcn_forward(const TcnNetwork& net, const HourlyGrid& grid, bool training,
                   Rng* rng = nullptr, ForwardTrace* trace_out = nullptr);

double predict_risk(const TcnNetwork& net, const HourlyGrid& grid);

struct TrainSample {
    HourlyGrid grid;
    int label = 0;
};

struct TrainRun {
    std::vector<double> train_loss; // per epoch, mean weighted loss
    std::vector<double> val_loss;
    std::size_t best_epoch = 0;
};

// Mini-batch Adam training with early stopping on validation loss; class
// imbalance handled by per-class weights inversely proportional to frequency.
// The network is left at the best-validation-loss weights. Deterministic
// given config.seed.
TrainRun train(TcnNetwork& net, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set, const TcnConfig& config);

// Versioned checkpoint; round-trip is bitwise exact (weights stored as
// hexfloats).
void save_checkpoint(const std::string& path, const TcnNetwork& net);
TcnNetwork load_checkpoint(const std::string& path);

} // namespace xews
