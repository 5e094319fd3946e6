#include "xews/tcn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace xews {

std::size_t TcnConfig::receptive_field() const {
    const std::size_t dil_sum = std::accumulate(dilations.begin(), dilations.end(),
                                                std::size_t{0});
    return 1 + convs_per_block * (kernel_size - 1) * dil_sum;
}

TcnNetwork build_network(const TcnConfig& config, Rng& rng) {
    if (config.dilations.size() != config.n_blocks)
        throw std::invalid_argument("build_network: one dilation per block required");
    if (config.receptive_field() < config.n_timesteps)
        throw std::invalid_argument("build_network: receptive field " +
                                    std::to_string(config.receptive_field()) +
                                    " does not cover the observation window");

    TcnNetwork tcn;
    tcn.config = config;
    std::size_t cin = config.n_features;
    for (std::size_t b = 0; b < config.n_blocks; ++b) {
        for (std::size_t c = 0; c < config.convs_per_block; ++c) {
            Layer conv;
            conv.spec.kind = LayerKind::CausalConv1d;
            conv.spec.kernel_size = config.kernel_size;
            conv.spec.dilation = config.dilations[b];
            conv.spec.in_channels = cin;
            conv.spec.out_channels = config.filters;
            conv.weights = he_init(rng, {config.kernel_size, cin, config.filters},
                                   config.kernel_size * cin);
            conv.bias = Tensor({config.filters});
            tcn.net.layers.push_back(std::move(conv));

            Layer act;
            act.spec.kind = LayerKind::Relu;
            act.spec.in_channels = act.spec.out_channels = config.filters;
            tcn.net.layers.push_back(std::move(act));

            Layer drop;
            drop.spec.kind = LayerKind::SpatialDropout;
            drop.spec.dropout_rate = config.dropout_rate;
            drop.spec.in_channels = drop.spec.out_channels = config.filters;
            tcn.net.layers.push_back(std::move(drop));

            Layer norm;
            norm.spec.kind = LayerKind::LayerNorm;
            norm.spec.in_channels = norm.spec.out_channels = config.filters;
            norm.weights = Tensor({config.filters});
            norm.weights.fill(1.0);
            norm.bias = Tensor({config.filters});
            tcn.net.layers.push_back(std::move(norm));

            cin = config.filters;
        }
    }
    Layer pool;
    pool.spec.kind = LayerKind::GlobalAvgPool;
    pool.spec.in_channels = pool.spec.out_channels = config.filters;
    tcn.net.layers.push_back(std::move(pool));

    Layer dense;
    dense.spec.kind = LayerKind::Dense;
    dense.spec.in_channels = config.filters;
    dense.spec.out_channels = 2;
    dense.weights = he_init(rng, {config.filters, 2}, config.filters);
    dense.bias = Tensor({2});
    tcn.net.layers.push_back(std::move(dense));

    Layer sm;
    sm.spec.kind = LayerKind::Softmax;
    sm.spec.in_channels = sm.spec.out_channels = 2;
    tcn.net.layers.push_back(std::move(sm));
    return tcn;
}

std::size_t parameter_count(const TcnNetwork& tcn) {
    std::size_t n = 0;
    for (const Layer& l : tcn.net.layers) n += l.weights.numel() + l.bias.numel();
    return n;
}

double tcn_forward(const TcnNetwork& tcn, const HourlyGrid& grid, bool training,
                   Rng* rng, ForwardTrace* trace_out) {
    for (double x : grid.values.v)
        if (x < -1e-12 || x > 1.0 + 1e-12 || !std::isfinite(x))
            throw std::invalid_argument("tcn_forward: input not scaled to [0,1]");
    ForwardTrace trace = network_forward(tcn.net, grid.values, training, rng);
    const double p = trace.output.at(1);
    if (trace_out) *trace_out = std::move(trace);
    return p;
}

double predict_risk(const TcnNetwork& tcn, const HourlyGrid& grid) {
    return tcn_forward(tcn, grid, /*training=*/false);
}

namespace {

double evaluate_loss(const TcnNetwork& tcn, const std::vector<TrainSample>& set,
                     const std::array<double, 2>& class_weight) {
    double total = 0.0;
    double wsum = 0.0;
    for (const TrainSample& s : set) {
        ForwardTrace trace = network_forward(tcn.net, s.grid.values, false, nullptr);
        const double w = class_weight[s.label];
        total += w * cross_entropy(trace.output, s.label);
        wsum += w;
    }
    return wsum > 0 ? total / wsum : 0.0;
}

std::vector<Tensor> snapshot_params(const Network& net) {
    std::vector<Tensor> out;
    for (const Layer& l : net.layers) {
        out.push_back(l.weights);
        out.push_back(l.bias);
    }
    return out;
}

void restore_params(Network& net, const std::vector<Tensor>& snap) {
    std::size_t i = 0;
    for (Layer& l : net.layers) {
        l.weights = snap[i++];
        l.bias = snap[i++];
    }
}

} // namespace

TrainRun train(TcnNetwork& tcn, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set, const TcnConfig& config) {
    if (train_set.empty() || val_set.empty())
        throw std::invalid_argument("train: empty split");

    // Per-class loss weights inversely proportional to class frequency,
    // normalized so the mean sample weight is 1.
    std::array<std::size_t, 2> counts = {0, 0};
    for (const TrainSample& s : train_set) counts[s.label]++;
    std::array<double, 2> class_weight = {1.0, 1.0};
    const double n = static_cast<double>(train_set.size());
    for (int c = 0; c < 2; ++c)
        class_weight[c] = counts[c] > 0 ? n / (2.0 * counts[c]) : 0.0;

    Rng rng = Rng(config.seed).derive(0x7261696eull); // training stream
    AdamState adam = AdamState::init(tcn.net, config.learning_rate);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    TrainRun run;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<Tensor> best_params = snapshot_params(tcn.net);
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        // Seeded Fisher-Yates shuffle.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);

        double epoch_loss = 0.0;
        double epoch_weight = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            Gradients batch = Gradients::zeros_like(tcn.net);
            double wsum = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const TrainSample& s = train_set[order[i]];
                const double w = class_weight[s.label];
                ForwardTrace trace = network_forward(tcn.net, s.grid.values, true, &rng);
                epoch_loss += w * cross_entropy(trace.output, s.label);
                epoch_weight += w;
                Gradients g = network_backward(tcn.net, trace, s.label, w);
                batch.accumulate(g);
                wsum += w;
            }
            if (wsum > 0) batch.scale(1.0 / wsum);
            adam_step(tcn.net, batch, adam);
        }
        run.train_loss.push_back(epoch_weight > 0 ? epoch_loss / epoch_weight : 0.0);

        const double vloss = evaluate_loss(tcn, val_set, class_weight);
        run.val_loss.push_back(vloss);
        if (vloss < best_val) {
            best_val = vloss;
            best_params = snapshot_params(tcn.net);
            run.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            break;
        }
    }
    restore_params(tcn.net, best_params);
    return run;
}

namespace {

constexpr const char* kCheckpointFormat = "xews-tcn/1";

std::string hexfloat(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

nlohmann::json tensor_to_json(const Tensor& t) {
    nlohmann::json j;
    j["shape"] = t.shape;
    std::vector<std::string> vals;
    vals.reserve(t.numel());
    for (double x : t.v) vals.push_back(hexfloat(x));
    j["values"] = std::move(vals);
    return j;
}

Tensor tensor_from_json(const nlohmann::json& j) {
    std::vector<std::size_t> shape = j.at("shape").get<std::vector<std::size_t>>();
    if (shape.empty()) return Tensor{}; // parameter-free layer
    std::vector<double> vals;
    for (const auto& s : j.at("values"))
        vals.push_back(std::strtod(s.get<std::string>().c_str(), nullptr));
    return Tensor(std::move(shape), std::move(vals));
}

} // namespace

void save_checkpoint(const std::string& path, const TcnNetwork& tcn) {
    nlohmann::json j;
    j["format"] = kCheckpointFormat;
    j["config"] = {
        {"n_timesteps", tcn.config.n_timesteps},
        {"n_features", tcn.config.n_features},
        {"n_blocks", tcn.config.n_blocks},
        {"filters", tcn.config.filters},
        {"kernel_size", tcn.config.kernel_size},
        {"dilations", tcn.config.dilations},
        {"convs_per_block", tcn.config.convs_per_block},
        {"dropout_rate", tcn.config.dropout_rate},
        {"learning_rate", tcn.config.learning_rate},
        {"batch_size", tcn.config.batch_size},
        {"max_epochs", tcn.config.max_epochs},
        {"patience", tcn.config.patience},
        {"seed", tcn.config.seed},
    };
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : tcn.net.layers) {
        nlohmann::json lj;
        lj["kind"] = to_string(l.spec.kind);
        lj["kernel_size"] = l.spec.kernel_size;
        lj["dilation"] = l.spec.dilation;
        lj["in_channels"] = l.spec.in_channels;
        lj["out_channels"] = l.spec.out_channels;
        lj["dropout_rate"] = l.spec.dropout_rate;
        lj["weights"] = tensor_to_json(l.weights);
        lj["bias"] = tensor_to_json(l.bias);
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump(1) << "\n";
}

TcnNetwork load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != kCheckpointFormat)
        throw std::runtime_error("checkpoint format mismatch in " + path);

    TcnNetwork tcn;
    const auto& cj = j.at("config");
    tcn.config.n_timesteps = cj.at("n_timesteps");
    tcn.config.n_features = cj.at("n_features");
    tcn.config.n_blocks = cj.at("n_blocks");
    tcn.config.filters = cj.at("filters");
    tcn.config.kernel_size = cj.at("kernel_size");
    tcn.config.dilations = cj.at("dilations").get<std::vector<std::size_t>>();
    tcn.config.convs_per_block = cj.at("convs_per_block");
    tcn.config.dropout_rate = cj.at("dropout_rate");
    tcn.config.learning_rate = cj.at("learning_rate");
    tcn.config.batch_size = cj.at("batch_size");
    tcn.config.max_epochs = cj.at("max_epochs");
    tcn.config.patience = cj.at("patience");
    tcn.config.seed = cj.at("seed");

    for (const auto& lj : j.at("layers")) {
        Layer l;
        l.spec.kind = layer_kind_from_string(lj.at("kind"));
        l.spec.kernel_size = lj.at("kernel_size");
        l.spec.dilation = lj.at("dilation");
        l.spec.in_channels = lj.at("in_channels");
        l.spec.out_channels = lj.at("out_channels");
        l.spec.dropout_rate = lj.at("dropout_rate");
        l.weights = tensor_from_json(lj.at("weights"));
        l.bias = tensor_from_json(lj.at("bias"));
        tcn.net.layers.push_back(std::move(l));
    }
    return tcn;
}

} // namespace xews
