#pragma once

#include <vector>

#include "xews/tcn.hpp"

namespace xews {

// One prediction decomposed onto the 24x34 input grid via the z+ relevance
// rule. Entries are non-negative and sum to start_relevance minus the
// reported leakage.
struct RelevanceMap {
    Tensor values; // 24 x 34 (or T x F for downsized configs)
    double prediction = 0.0;      // positive-class probability
    double start_relevance = 0.0; // max(0, positive-class logit)
    double leakage = 0.0;         // relevance dropped at zero denominators
    bool no_positive_evidence = false;

    double total() const {
        double s = 0.0;
        for (double x : values.v) s += x;
        return s;
    }
};

constexpr double kZplusStabilizer = 1e-12;

// z+ rule on a dense map: R_in[i] = sum_j (w+_{ij} a_i / sum_i w+_{ij} a_i) R_j.
// Activations enter at their positive part, which keeps the rule valid behind
// normalization layers whose outputs can dip below zero. When an output's
// positive-weighted input sum is zero the relevance is split proportionally
// to the positive weights alone, and when the output has no positive weight
// either, uniformly over its (valid) inputs, so conservation is exact.
// `leakage` stays as an accounting channel for degenerate maps.
Tensor zplus_propagate_linear(const Tensor& activations, const Tensor& weights,
                              const Tensor& out_relevance, double& leakage);

// Same rule on the unrolled linear map of a causal convolution.
Tensor zplus_propagate_conv(const Tensor& input, const Tensor& weights,
                            std::size_t dilation, const Tensor& out_relevance,
                            double& leakage);

// Global average pooling is an equal-positive-weight linear map, so z+
// reduces to splitting each channel's relevance proportionally to the
// activation at each timestep.
Tensor propagate_gap(const Tensor& pooled_relevance, const Tensor& pre_pool,
                     double& leakage);

// Layer normalization is treated as a relevance-transparent rescaling.
inline Tensor propagate_layernorm(const Tensor& out_relevance) { return out_relevance; }

// Generic relevance backward pass over a layer stack given a forward trace
// (dropout inactive). `out_relevance` is shaped like the last non-softmax
// layer's output.
Tensor propagate_relevance(const Network& net, const ForwardTrace& trace,
                           const Tensor& out_relevance, double& leakage);

// Full explanation: forward with training=false, seed the backward pass with
// max(0, positive-class logit), propagate to the input grid.
RelevanceMap explain(const TcnNetwork& net, const HourlyGrid& grid);

// Parameters ranked by mean relevance over the time axis, descending; ties
// broken by parameter index. k is clamped to the parameter count.
std::vector<int> top_k(const RelevanceMap& map, std::size_t k = 10);

struct GlobalImportance {
    std::vector<int> order;            // parameter indices, descending importance
    std::vector<double> mean_relevance; // aligned with parameter index
};

// Mean relevance per parameter over every datapoint of every explanation,
// treating all timesteps equally.
GlobalImportance global_importance(const std::vector<RelevanceMap>& explanations);

struct LocalSummaryPoint {
    int parameter = 0;
    double relevance = 0.0;
    double value = 0.0;      // raw (unscaled) value
    double percentile = 0.0; // empirical CDF position in [0,1]
};

// Empirical per-parameter value distribution for percentile coloring.
class ValuePercentiles {
public:
    explicit ValuePercentiles(const std::vector<Admission>& population);
    // Fraction of population values <= v (midrank for ties), clamped [0,1].
    double percentile(int parameter, double v) const;

private:
    std::array<std::vector<double>, kNumParameters> sorted_;
};

// One point per observed (timestep, parameter) cell of every explanation;
// masked-missing cells are skipped.
std::vector<LocalSummaryPoint> local_summary(
    const std::vector<RelevanceMap>& explanations,
    const std::vector<const HourlyGrid*>& grids, const FeatureScaler& scaler,
    const ValuePercentiles& percentiles);

} // namespace xews
