#include "xews/dtd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xews {

Tensor zplus_propagate_linear(const Tensor& activations, const Tensor& weights,
                              const Tensor& out_relevance, double& leakage) {
    const std::size_t cin = weights.shape[0];
    const std::size_t cout = weights.shape[1];
    if (activations.numel() != cin || out_relevance.numel() != cout)
        throw std::invalid_argument("zplus_propagate_linear: shape mismatch");

    Tensor in_rel({cin});
    for (std::size_t j = 0; j < cout; ++j) {
        const double rj = out_relevance.at(j);
        if (rj == 0.0) continue;
        double denom = 0.0;
        for (std::size_t i = 0; i < cin; ++i) {
            const double w = weights.at(i, j);
            if (w > 0.0) denom += w * std::max(0.0, activations.at(i));
        }
        if (denom == 0.0) {
            // No positive-signal support: split over positive weights alone;
            // leak only when the unit has no positive weight at all.
            double wsum = 0.0;
            for (std::size_t i = 0; i < cin; ++i) wsum += std::max(0.0, weights.at(i, j));
            if (wsum == 0.0) {
                // Not even a positive weight: spread uniformly.
                const double u = rj / static_cast<double>(cin);
                for (std::size_t i = 0; i < cin; ++i) in_rel.at(i) += u;
                continue;
            }
            const double s = rj / (wsum + kZplusStabilizer);
            for (std::size_t i = 0; i < cin; ++i) {
                const double w = weights.at(i, j);
                if (w > 0.0) in_rel.at(i) += w * s;
            }
            continue;
        }
        const double scale = rj / (denom + kZplusStabilizer);
        for (std::size_t i = 0; i < cin; ++i) {
            const double w = weights.at(i, j);
            const double a = std::max(0.0, activations.at(i));
            if (w > 0.0 && a > 0.0) in_rel.at(i) += w * a * scale;
        }
    }
    return in_rel;
}

Tensor zplus_propagate_conv(const Tensor& input, const Tensor& weights,
                            std::size_t dilation, const Tensor& out_relevance,
                            double& leakage) {
    const std::size_t T = input.shape[0];
    const std::size_t cin = input.shape[1];
    const std::size_t K = weights.shape[0];
    const std::size_t cout = weights.shape[2];
    if (weights.shape[1] != cin || out_relevance.shape[0] != T ||
        out_relevance.shape[1] != cout)
        throw std::invalid_argument("zplus_propagate_conv: shape mismatch");

    Tensor in_rel({T, cin});
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < cout; ++o) {
            const double rj = out_relevance.at(t, o);
            if (rj == 0.0) continue;
            double denom = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) -
                                           static_cast<std::ptrdiff_t>((K - 1 - k) * dilation);
                if (src < 0) continue; // padded positions contribute zero
                for (std::size_t c = 0; c < cin; ++c) {
                    const double w = weights.at(k, c, o);
                    if (w > 0.0)
                        denom += w * std::max(0.0, input.at(static_cast<std::size_t>(src), c));
                }
            }
            if (denom == 0.0) {
                double wsum = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    const std::ptrdiff_t src =
                        static_cast<std::ptrdiff_t>(t) -
                        static_cast<std::ptrdiff_t>((K - 1 - k) * dilation);
                    if (src < 0) continue;
                    for (std::size_t c = 0; c < cin; ++c)
                        wsum += std::max(0.0, weights.at(k, c, o));
                }
                std::size_t valid = 0;
                for (std::size_t k = 0; k < K; ++k)
                    if (static_cast<std::ptrdiff_t>(t) -
                            static_cast<std::ptrdiff_t>((K - 1 - k) * dilation) >= 0)
                        ++valid;
                const double s = wsum > 0.0
                                     ? rj / (wsum + kZplusStabilizer)
                                     : rj / static_cast<double>(valid * cin);
                for (std::size_t k = 0; k < K; ++k) {
                    const std::ptrdiff_t src =
                        static_cast<std::ptrdiff_t>(t) -
                        static_cast<std::ptrdiff_t>((K - 1 - k) * dilation);
                    if (src < 0) continue;
                    for (std::size_t c = 0; c < cin; ++c) {
                        const double w = weights.at(k, c, o);
                        if (wsum > 0.0) {
                            if (w > 0.0) in_rel.at(static_cast<std::size_t>(src), c) += w * s;
                        } else {
                            in_rel.at(static_cast<std::size_t>(src), c) += s;
                        }
                    }
                }
                continue;
            }
            const double scale = rj / (denom + kZplusStabilizer);
            for (std::size_t k = 0; k < K; ++k) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) -
                                           static_cast<std::ptrdiff_t>((K - 1 - k) * dilation);
                if (src < 0) continue;
                for (std::size_t c = 0; c < cin; ++c) {
                    const double w = weights.at(k, c, o);
                    const double a = std::max(0.0, input.at(static_cast<std::size_t>(src), c));
                    if (w > 0.0 && a > 0.0)
                        in_rel.at(static_cast<std::size_t>(src), c) += w * a * scale;
                }
            }
        }
    }
    return in_rel;
}

Tensor propagate_gap(const Tensor& pooled_relevance, const Tensor& pre_pool,
                     double& leakage) {
    const std::size_t T = pre_pool.shape[0];
    const std::size_t C = pre_pool.shape[1];
    if (pooled_relevance.numel() != C)
        throw std::invalid_argument("propagate_gap: shape mismatch");
    Tensor in_rel({T, C});
    for (std::size_t c = 0; c < C; ++c) {
        const double rc = pooled_relevance.at(c);
        if (rc == 0.0) continue;
        double denom = 0.0;
        for (std::size_t t = 0; t < T; ++t) denom += std::max(0.0, pre_pool.at(t, c));
        if (denom == 0.0) {
            // Dead channel: equal pooling weights make the fallback uniform.
            const double s = rc / static_cast<double>(T);
            for (std::size_t t = 0; t < T; ++t) in_rel.at(t, c) += s;
            continue;
        }
        const double scale = rc / (denom + kZplusStabilizer);
        for (std::size_t t = 0; t < T; ++t) {
            const double a = pre_pool.at(t, c);
            if (a > 0.0) in_rel.at(t, c) += a * scale;
        }
    }
    return in_rel;
}

namespace {

// Activation tensor used for the z+ split at layer `idx`: the layer's actual
// input with any directly preceding normalization unwrapped, so proportions
// are always taken over the non-negative post-activation signal. Without
// this, relevance passed through a normalization layer can land on units
// whose underlying activation is zero and then hit an empty z+ denominator.
Tensor signal_input(const Network& net, const ForwardTrace& trace, std::size_t idx) {
    std::size_t j = idx;
    while (j > 0 && net.layers[j - 1].spec.kind == LayerKind::LayerNorm) --j;
    if (j > 0 && net.layers[j - 1].spec.kind == LayerKind::GlobalAvgPool)
        return global_avg_pool(signal_input(net, trace, j - 1));
    return trace.inputs[j];
}

} // namespace

Tensor propagate_relevance(const Network& net, const ForwardTrace& trace,
                           const Tensor& out_relevance, double& leakage) {
    Tensor rel = out_relevance;
    for (std::size_t idx = net.layers.size(); idx-- > 0;) {
        const Layer& layer = net.layers[idx];
        const Tensor in = signal_input(net, trace, idx);
        switch (layer.spec.kind) {
        case LayerKind::Softmax:
            // The backward pass is seeded on the logits; nothing to do here.
            break;
        case LayerKind::Dense:
            rel = zplus_propagate_linear(in, layer.weights, rel, leakage);
            break;
        case LayerKind::GlobalAvgPool:
            rel = propagate_gap(rel, in, leakage);
            break;
        case LayerKind::CausalConv1d:
            rel = zplus_propagate_conv(in, layer.weights, layer.spec.dilation, rel, leakage);
            break;
        case LayerKind::LayerNorm:
            rel = propagate_layernorm(rel);
            break;
        case LayerKind::Relu:
        case LayerKind::SpatialDropout:
            // Identity for relevance (dropout is inactive at explanation time).
            break;
        }
    }
    return rel;
}

RelevanceMap explain(const TcnNetwork& tcn, const HourlyGrid& grid) {
    ForwardTrace trace;
    RelevanceMap map;
    map.prediction = tcn_forward(tcn, grid, /*training=*/false, nullptr, &trace);
    map.values = Tensor(grid.values.shape);

    const double logit_pos = trace.logits.at(1);
    if (logit_pos <= 0.0) {
        map.no_positive_evidence = true;
        return map;
    }
    map.start_relevance = logit_pos;

    Tensor seed({2});
    seed.at(1) = logit_pos;
    map.values = propagate_relevance(tcn.net, trace, seed, map.leakage);
    return map;
}

std::vector<int> top_k(const RelevanceMap& map, std::size_t k) {
    const std::size_t T = map.values.shape[0];
    const std::size_t F = map.values.shape[1];
    std::vector<double> mean(F, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t p = 0; p < F; ++p) mean[p] += map.values.at(t, p);
    for (double& m : mean) m /= static_cast<double>(T);

    std::vector<int> order(F);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (mean[a] != mean[b]) return mean[a] > mean[b];
        return a < b;
    });
    order.resize(std::min(k, order.size()));
    return order;
}

GlobalImportance global_importance(const std::vector<RelevanceMap>& explanations) {
    GlobalImportance gi;
    if (explanations.empty()) return gi;
    const std::size_t F = explanations.front().values.shape[1];
    gi.mean_relevance.assign(F, 0.0);
    std::size_t points = 0;
    for (const RelevanceMap& m : explanations) {
        const std::size_t T = m.values.shape[0];
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t p = 0; p < F; ++p) gi.mean_relevance[p] += m.values.at(t, p);
        points += T;
    }
    for (double& x : gi.mean_relevance) x /= static_cast<double>(points);

    gi.order.resize(F);
    std::iota(gi.order.begin(), gi.order.end(), 0);
    std::stable_sort(gi.order.begin(), gi.order.end(), [&](int a, int b) {
        if (gi.mean_relevance[a] != gi.mean_relevance[b])
            return gi.mean_relevance[a] > gi.mean_relevance[b];
        return a < b;
    });
    return gi;
}

ValuePercentiles::ValuePercentiles(const std::vector<Admission>& population) {
    for (const Admission& adm : population)
        for (const Event& ev : adm.events)
            if (ev.code < kNumParameters) sorted_[ev.code].push_back(ev.value);
    for (auto& v : sorted_) std::sort(v.begin(), v.end());
}

double ValuePercentiles::percentile(int parameter, double v) const {
    const auto& s = sorted_[parameter];
    if (s.empty()) return 0.5;
    const auto lo = std::lower_bound(s.begin(), s.end(), v) - s.begin();
    const auto hi = std::upper_bound(s.begin(), s.end(), v) - s.begin();
    return std::clamp(0.5 * (static_cast<double>(lo) + static_cast<double>(hi)) /
                          static_cast<double>(s.size()),
                      0.0, 1.0);
}

std::vector<LocalSummaryPoint> local_summary(
    const std::vector<RelevanceMap>& explanations,
    const std::vector<const HourlyGrid*>& grids, const FeatureScaler& scaler,
    const ValuePercentiles& percentiles) {
    if (explanations.size() != grids.size())
        throw std::invalid_argument("local_summary: explanation/grid count mismatch");
    std::vector<LocalSummaryPoint> points;
    for (std::size_t i = 0; i < explanations.size(); ++i) {
        const RelevanceMap& m = explanations[i];
        const HourlyGrid& g = *grids[i];
        for (int t = 0; t < kNumTimesteps; ++t) {
            for (int p = 0; p < kNumParameters; ++p) {
                if (!g.observed(t, p)) continue;
                LocalSummaryPoint pt;
                pt.parameter = p;
                pt.relevance = m.values.at(t, p);
                pt.value = scaler.unscale(p, g.values.at(t, p));
                pt.percentile = percentiles.percentile(p, pt.value);
                points.push_back(pt);
            }
        }
    }
    return points;
}

} // namespace xews
