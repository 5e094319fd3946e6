#include "xews/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace xews {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct TreeBuilder {
    const std::vector<std::vector<double>>& x;
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    std::size_t max_depth;
    Tree tree;

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        double g_sum = 0.0, h_sum = 0.0;
        for (std::size_t r : rows) {
            g_sum += grad[r];
            h_sum += hess[r];
        }
        const int node_id = static_cast<int>(tree.size());
        tree.emplace_back();
        tree[node_id].value = g_sum / (h_sum + 1e-12);

        if (depth == 0 || rows.size() < 2) return node_id;

        // Best split by squared-gradient gain (variance reduction of the
        // residual fit). Candidate thresholds are midpoints between distinct
        // sorted feature values.
        const std::size_t d = x[rows[0]].size();
        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;
        const double parent = g_sum * g_sum / (h_sum + 1e-12);

        std::vector<std::size_t> order(rows);
        for (std::size_t f = 0; f < d; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
                return a < b;
            });
            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                gl += grad[order[i]];
                hl += hess[order[i]];
                const double v0 = x[order[i]][f];
                const double v1 = x[order[i + 1]][f];
                if (v0 == v1) continue;
                const double gr = g_sum - gl;
                const double hr = h_sum - hl;
                const double gain =
                    gl * gl / (hl + 1e-12) + gr * gr / (hr + 1e-12) - parent;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (v0 + v1);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);
        if (left_rows.empty() || right_rows.empty()) return node_id;

        tree[node_id].feature = best_feature;
        tree[node_id].threshold = best_threshold;
        tree[node_id].left = build(std::move(left_rows), depth - 1);
        tree[node_id].right = build(std::move(right_rows), depth - 1);
        return node_id;
    }
};

double tree_predict(const Tree& tree, const std::vector<double>& features) {
    int node = 0;
    while (tree[node].feature >= 0)
        node = features[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                    : tree[node].right;
    return tree[node].value;
}

} // namespace

GbmModel train_gbm(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, const GbmParams& params) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("train_gbm: bad training set");
    const std::size_t n = x.size();
    const std::size_t n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));

    GbmModel model;
    model.shrinkage = params.shrinkage;

    const double rate =
        std::clamp(static_cast<double>(n_pos) / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    model.init_log_odds = std::log(rate / (1.0 - rate));
    if (n_pos == 0 || n_pos == n) return model; // constant model at clamped base rate

    std::vector<double> score(n, model.init_log_odds);
    std::vector<double> grad(n), hess(n);

    for (std::size_t round = 0; round < params.n_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(score[i]);
            grad[i] = static_cast<double>(y[i]) - p; // negative gradient
            hess[i] = p * (1.0 - p);
        }
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        TreeBuilder builder{x, grad, hess, params.max_depth, {}};
        builder.build(std::move(all), params.max_depth);
        for (std::size_t i = 0; i < n; ++i)
            score[i] += params.shrinkage * tree_predict(builder.tree, x[i]);
        model.trees.push_back(std::move(builder.tree));

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = std::clamp(sigmoid(score[i]), 1e-15, 1.0 - 1e-15);
            loss -= y[i] ? std::log(p) : std::log(1.0 - p);
        }
        model.train_loss.push_back(loss / static_cast<double>(n));
    }
    return model;
}

double predict_gbm(const GbmModel& model, const std::vector<double>& features) {
    double score = model.init_log_odds;
    for (const Tree& tree : model.trees)
        score += model.shrinkage * tree_predict(tree, features);
    return sigmoid(score);
}

namespace {

constexpr const char* kGbmFormat = "xews-gbm/1";

std::string hexfloat(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double from_hexfloat(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

} // namespace

void save_gbm(const std::string& path, const GbmModel& model) {
    nlohmann::json j;
    j["format"] = kGbmFormat;
    j["init_log_odds"] = hexfloat(model.init_log_odds);
    j["shrinkage"] = hexfloat(model.shrinkage);
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& tree : model.trees) {
        nlohmann::json tj = nlohmann::json::array();
        for (const TreeNode& node : tree)
            tj.push_back({{"f", node.feature},
                          {"t", hexfloat(node.threshold)},
                          {"l", node.left},
                          {"r", node.right},
                          {"v", hexfloat(node.value)}});
        trees.push_back(std::move(tj));
    }
    j["trees"] = std::move(trees);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write gbm checkpoint: " + path);
    out << j.dump(1) << "\n";
}

GbmModel load_gbm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gbm checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != kGbmFormat)
        throw std::runtime_error("gbm checkpoint format mismatch in " + path);
    GbmModel model;
    model.init_log_odds = from_hexfloat(j.at("init_log_odds"));
    model.shrinkage = from_hexfloat(j.at("shrinkage"));
    for (const auto& tj : j.at("trees")) {
        Tree tree;
        for (const auto& nj : tj) {
            TreeNode node;
            node.feature = nj.at("f");
            node.threshold = from_hexfloat(nj.at("t"));
            node.left = nj.at("l");
            node.right = nj.at("r");
            node.value = from_hexfloat(nj.at("v"));
            tree.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

} // namespace xews
