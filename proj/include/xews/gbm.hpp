#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xews {

// Binary gradient boosting on logistic loss with depth-limited regression
// trees fit to negative gradients, variance-reduction splits, and Newton leaf
// values. Deterministic: no row or feature subsampling.

struct GbmParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 3;
    double shrinkage = 0.1;
    std::uint64_t seed = 1;
};

struct TreeNode {
    int feature = -1;    // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf value
};

using Tree = std::vector<TreeNode>;

struct GbmModel {
    double init_log_odds = 0.0;
    double shrinkage = 0.1;
    std::vector<Tree> trees;
    std::vector<double> train_loss; // mean logistic loss after each round
};

GbmModel train_gbm(const std::vector<std::vector<double>>& features,
                   const std::vector<int>& labels, const GbmParams& params = {});

double predict_gbm(const GbmModel& model, const std::vector<double>& features);

void save_gbm(const std::string& path, const GbmModel& model);
GbmModel load_gbm(const std::string& path);

} // namespace xews
