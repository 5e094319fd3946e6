#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xews/dtd.hpp"

using namespace xews;

TEST_CASE("z+ dense: equal weights split relevance by activation") {
    // a = [1,2], both weights 1, output relevance 3 -> [1,2]
    Tensor a({2}, {1, 2});
    Tensor w({2, 1}, {1, 1});
    Tensor r({1}, {3});
    double leak = 0.0;
    Tensor out = zplus_propagate_linear(a, w, r, leak);
    CHECK(out.at(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.at(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(leak == 0.0);
}

TEST_CASE("z+ dense: negative weights are excluded") {
    // a = [1,1], w = [2,-1], R = 3 -> all 3 to the first input
    Tensor a({2}, {1, 1});
    Tensor w({2, 1}, {2, -1});
    Tensor r({1}, {3});
    double leak = 0.0;
    Tensor out = zplus_propagate_linear(a, w, r, leak);
    CHECK(out.at(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(out.at(1) == 0.0);
    CHECK(leak == 0.0);
}

TEST_CASE("z+ dense: all-negative weights fall back to a uniform split") {
    Tensor a({2}, {1, 1});
    Tensor w({2, 1}, {-1, -2});
    Tensor r({1}, {5});
    double leak = 0.0;
    Tensor out = zplus_propagate_linear(a, w, r, leak);
    CHECK(out.at(0) == doctest::Approx(2.5));
    CHECK(out.at(1) == doctest::Approx(2.5));
    CHECK(leak == 0.0);
}

TEST_CASE("z+ dense: dead activations fall back to positive-weight split") {
    Tensor a({2}, {0, 0});
    Tensor w({2, 1}, {1, 3});
    Tensor r({1}, {4});
    double leak = 0.0;
    Tensor out = zplus_propagate_linear(a, w, r, leak);
    CHECK(out.at(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.at(1) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(leak == 0.0);
}

TEST_CASE("GAP propagation: dead channel splits uniformly over time") {
    Tensor pre({4, 1});
    Tensor pooled_r({1}, {2});
    double leak = 0.0;
    Tensor out = propagate_gap(pooled_r, pre, leak);
    for (std::size_t t = 0; t < 4; ++t) CHECK(out.at(t, 0) == doctest::Approx(0.5));
    CHECK(leak == 0.0);
}

TEST_CASE("z+ dense: negative activations contribute nothing") {
    Tensor a({2}, {-4, 2});
    Tensor w({2, 1}, {1, 1});
    Tensor r({1}, {2});
    double leak = 0.0;
    Tensor out = zplus_propagate_linear(a, w, r, leak);
    CHECK(out.at(0) == 0.0);
    CHECK(out.at(1) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("z+ conv: identity kernel passes relevance through") {
    Tensor input({3, 2}, {1, 2, 3, 4, 5, 6});
    Tensor w({1, 2, 2}, {1, 0, 0, 1});
    Tensor r({3, 2}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    double leak = 0.0;
    Tensor out = zplus_propagate_conv(input, w, 1, r, leak);
    for (std::size_t j = 0; j < r.numel(); ++j)
        CHECK(out.v[j] == doctest::Approx(r.v[j]).epsilon(1e-9));
    CHECK(leak < 1e-12);
}

TEST_CASE("z+ conv: conservation under random positive setups") {
    Rng rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t T = 2 + rng.below(5);
        const std::size_t cin = 1 + rng.below(3);
        const std::size_t cout = 1 + rng.below(3);
        const std::size_t K = 1 + rng.below(3);
        const std::size_t dil = 1 + rng.below(2);
        Tensor input({T, cin});
        for (double& x : input.v) x = rng.uniform(0.05, 1.0);
        Tensor w({K, cin, cout});
        for (double& x : w.v) x = rng.uniform(0.05, 1.0);
        Tensor r({T, cout});
        for (double& x : r.v) x = rng.uniform(0.0, 1.0);
        double leak = 0.0;
        Tensor out = zplus_propagate_conv(input, w, dil, r, leak);
        double in_sum = 0.0, out_sum = leak;
        for (double x : r.v) in_sum += x;
        for (double x : out.v) {
            CHECK(x >= 0.0);
            out_sum += x;
        }
        CHECK(out_sum == doctest::Approx(in_sum).epsilon(1e-9));
    }
}

TEST_CASE("GAP propagation splits channel relevance by timestep activation") {
    Tensor pre({2, 2}, {1, 5, 3, 0});
    Tensor pooled_r({2}, {4, 7});
    double leak = 0.0;
    Tensor out = propagate_gap(pooled_r, pre, leak);
    CHECK(out.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9)); // 4 * 1/(1+3)
    CHECK(out.at(1, 0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(out.at(0, 1) == doctest::Approx(7.0).epsilon(1e-9)); // all of channel 1
    CHECK(out.at(1, 1) == 0.0);
    CHECK(leak == 0.0);
}

namespace {

Layer make_layer(LayerKind k, std::size_t cin, std::size_t cout) {
    Layer l;
    l.spec.kind = k;
    l.spec.in_channels = cin;
    l.spec.out_channels = cout;
    return l;
}

// Brute-force oracle: unroll the whole stack (dense layers over flattened
// [T x C] vectors; convs as explicit matrices) and apply the z+ rule layer by
// layer on the explicit matrices.
Tensor unroll_conv_matrix(const Layer& l, std::size_t T) {
    const std::size_t K = l.spec.kernel_size;
    const std::size_t cin = l.weights.shape[1];
    const std::size_t cout = l.weights.shape[2];
    const std::size_t dil = l.spec.dilation;
    Tensor m({T * cin, T * cout});
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t src =
                static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>((K - 1 - k) * dil);
            if (src < 0) continue;
            for (std::size_t c = 0; c < cin; ++c)
                for (std::size_t o = 0; o < cout; ++o)
                    m.at(static_cast<std::size_t>(src) * cin + c, t * cout + o) +=
                        l.weights.at(k, c, o);
        }
    return m;
}

Tensor zplus_matrix(const Tensor& act_flat, const Tensor& matrix, const Tensor& rel_flat,
                    double& leak) {
    const std::size_t n_in = matrix.shape[0];
    const std::size_t n_out = matrix.shape[1];
    Tensor out({n_in});
    for (std::size_t j = 0; j < n_out; ++j) {
        double denom = 0.0;
        for (std::size_t i = 0; i < n_in; ++i)
            denom += std::max(0.0, matrix.at(i, j)) * std::max(0.0, act_flat.at(i));
        if (denom == 0.0) {
            // Mirror the positive-weight fallback of the propagators.
            double wsum = 0.0;
            std::size_t in_field = 0;
            for (std::size_t i = 0; i < n_in; ++i) {
                wsum += std::max(0.0, matrix.at(i, j));
                if (matrix.at(i, j) != 0.0) ++in_field;
            }
            if (wsum > 0.0) {
                for (std::size_t i = 0; i < n_in; ++i)
                    out.at(i) += std::max(0.0, matrix.at(i, j)) / (wsum + kZplusStabilizer) *
                                 rel_flat.at(j);
            } else {
                // Uniform over the unit's receptive field (nonzero entries).
                for (std::size_t i = 0; i < n_in; ++i)
                    if (matrix.at(i, j) != 0.0)
                        out.at(i) += rel_flat.at(j) / static_cast<double>(in_field);
            }
            continue;
        }
        for (std::size_t i = 0; i < n_in; ++i)
            out.at(i) += std::max(0.0, matrix.at(i, j)) * std::max(0.0, act_flat.at(i)) /
                         (denom + kZplusStabilizer) * rel_flat.at(j);
    }
    return out;
}

Tensor flatten(const Tensor& t) { return Tensor({t.numel()}, t.v); }

} // namespace

TEST_CASE("propagate_relevance matches the unrolled-matrix oracle") {
    Rng rng(77);
    for (int rep = 0; rep < 1000; ++rep) {
        // Random small stack: 1-3 conv layers with relus (and pass-through
        // kinds sprinkled in), each <=5 units, on a short window.
        const std::size_t T = 2 + rng.below(3);
        const std::size_t n_layers = 1 + rng.below(3);
        Network net;
        std::vector<Tensor> matrices;
        std::size_t cin = 1 + rng.below(4);
        Tensor input({T, cin});
        for (double& x : input.v) x = rng.uniform(0.0, 1.0);

        for (std::size_t li = 0; li < n_layers; ++li) {
            const std::size_t cout = 1 + rng.below(4);
            Layer conv = make_layer(LayerKind::CausalConv1d, cin, cout);
            conv.spec.kernel_size = 1 + rng.below(2);
            conv.spec.dilation = 1 + rng.below(2);
            conv.weights = Tensor({conv.spec.kernel_size, cin, cout});
            for (double& x : conv.weights.v) x = rng.uniform(-1.0, 1.0);
            conv.bias = Tensor({cout}); // z+ ignores bias
            net.layers.push_back(conv);
            if (rng.uniform() < 0.5)
                net.layers.push_back(make_layer(LayerKind::Relu, cout, cout));
            cin = cout;
        }

        ForwardTrace trace = network_forward(net, input, false, nullptr);
        Tensor out_rel(trace.output.shape);
        for (double& x : out_rel.v) x = rng.uniform(0.0, 1.0);

        double leak = 0.0;
        Tensor got = propagate_relevance(net, trace, out_rel, leak);

        // Oracle: walk the same stack on unrolled matrices. Relu layers pass
        // relevance through unchanged (their activations gate the next conv's
        // input, already captured by the trace).
        Tensor rel = flatten(out_rel);
        double oracle_leak = 0.0;
        for (std::size_t li = net.layers.size(); li-- > 0;) {
            const Layer& l = net.layers[li];
            if (l.spec.kind != LayerKind::CausalConv1d) continue;
            Tensor m = unroll_conv_matrix(l, T);
            rel = zplus_matrix(flatten(trace.inputs[li]), m, rel, oracle_leak);
        }

        REQUIRE(got.numel() == rel.numel());
        for (std::size_t j = 0; j < rel.numel(); ++j)
            CHECK(std::abs(got.v[j] - rel.v[j]) < 1e-12);
        CHECK(std::abs(leak - oracle_leak) < 1e-12);
    }
}

namespace {

HourlyGrid random_grid(Rng& rng, std::size_t T, std::size_t F) {
    HourlyGrid g;
    g.values = Tensor({T, F});
    for (double& x : g.values.v) x = rng.uniform();
    g.mask.assign(T * F, true);
    g.window_end = static_cast<double>(T);
    return g;
}

TcnNetwork small_net(std::uint64_t seed, std::size_t T = 8, std::size_t F = 5) {
    TcnConfig cfg;
    cfg.n_timesteps = T;
    cfg.n_features = F;
    cfg.filters = 6;
    cfg.kernel_size = 3;
    cfg.dilations = {1, 2, 4};
    cfg.seed = seed;
    Rng rng(seed);
    return build_network(cfg, rng);
}

} // namespace

TEST_CASE("explain: conservation and non-negativity on random networks") {
    Rng seed_rng(5150);
    for (int rep = 0; rep < 20; ++rep) {
        TcnNetwork net = small_net(seed_rng.next_u64());
        Rng data(seed_rng.next_u64());
        HourlyGrid g = random_grid(data, 8, 5);
        RelevanceMap map = explain(net, g);
        CHECK(map.prediction > 0.0);
        CHECK(map.prediction < 1.0);
        for (double x : map.values.v) CHECK(x >= 0.0);
        if (map.no_positive_evidence) {
            CHECK(map.start_relevance == 0.0);
            CHECK(map.total() == 0.0);
        } else {
            CHECK(map.leakage >= 0.0);
            CHECK(map.leakage <= 0.01 * map.start_relevance + 1e-15);
            CHECK(std::abs(map.total() + map.leakage - map.start_relevance) <=
                  1e-6 * map.start_relevance);
        }
    }
}

TEST_CASE("explain: negative positive-class logit flags no positive evidence") {
    TcnNetwork net = small_net(99);
    // Force the positive-class logit strongly negative.
    Layer& dense = net.net.layers[net.net.layers.size() - 2];
    dense.bias.at(1) = -50.0;
    dense.bias.at(0) = 50.0;
    Rng data(1);
    HourlyGrid g = random_grid(data, 8, 5);
    RelevanceMap map = explain(net, g);
    CHECK(map.no_positive_evidence);
    CHECK(map.start_relevance == 0.0);
    CHECK(map.total() == 0.0);
}

TEST_CASE("explain: identical with and without inactive dropout layers") {
    TcnNetwork with = small_net(7);
    TcnNetwork without = with;
    // Strip dropout layers; they are identity at inference and pass-through
    // for relevance.
    std::vector<Layer> kept;
    for (const Layer& l : without.net.layers)
        if (l.spec.kind != LayerKind::SpatialDropout) kept.push_back(l);
    without.net.layers = std::move(kept);

    Rng data(8);
    HourlyGrid g = random_grid(data, 8, 5);
    RelevanceMap a = explain(with, g);
    RelevanceMap b = explain(without, g);
    CHECK(a.values.v == b.values.v);
    CHECK(a.start_relevance == b.start_relevance);
}

TEST_CASE("top_k orders parameters by mean relevance over time") {
    RelevanceMap map;
    map.values = Tensor({2, 4});
    // Column means: p0 = 0.5, p1 = 3.0, p2 = 0.5, p3 = 2.0
    map.values.at(0, 0) = 1.0;
    map.values.at(0, 1) = 2.0;
    map.values.at(1, 1) = 4.0;
    map.values.at(1, 2) = 1.0;
    map.values.at(0, 3) = 2.0;
    map.values.at(1, 3) = 2.0;
    std::vector<int> order = top_k(map, 4);
    CHECK(order == std::vector<int>{1, 3, 0, 2}); // tie 0 vs 2 -> lower index
    CHECK(top_k(map, 2) == std::vector<int>{1, 3});
    CHECK(top_k(map, 99).size() == 4);
}

TEST_CASE("global importance averages over all explanations and timesteps") {
    RelevanceMap a, b;
    a.values = Tensor({2, 2}, {1, 0, 3, 0});
    b.values = Tensor({2, 2}, {0, 4, 0, 8});
    GlobalImportance gi = global_importance({a, b});
    REQUIRE(gi.mean_relevance.size() == 2);
    CHECK(gi.mean_relevance[0] == doctest::Approx(1.0)); // (1+3+0+0)/4
    CHECK(gi.mean_relevance[1] == doctest::Approx(3.0)); // (0+0+4+8)/4
    CHECK(gi.order == std::vector<int>{1, 0});
}

TEST_CASE("value percentiles use the midrank convention") {
    Admission adm;
    adm.admission_id = "a";
    adm.length_of_stay = 48.0;
    for (double v : {1.0, 2.0, 2.0, 4.0})
        adm.events.push_back({1.0, kParamPulse, v});
    ValuePercentiles pct({adm});
    CHECK(pct.percentile(kParamPulse, 1.0) == doctest::Approx(0.125)); // (0+0.5)/4
    CHECK(pct.percentile(kParamPulse, 2.0) == doctest::Approx(0.5));   // (1+1.5)/2 /4
    CHECK(pct.percentile(kParamPulse, 4.0) == doctest::Approx(0.875));
    CHECK(pct.percentile(kParamPulse, 0.0) == 0.0);
    CHECK(pct.percentile(kParamPulse, 9.0) == 1.0);
    // No data for this parameter: falls back to 0.5.
    CHECK(pct.percentile(kParamSpo2, 95.0) == doctest::Approx(0.5));
}

TEST_CASE("local summary reports only observed cells with raw values") {
    RelevanceMap map;
    map.values = Tensor({2, kNumParameters});
    map.values.at(0, kParamPulse) = 0.7;
    map.values.at(1, kParamPulse) = 0.1;

    HourlyGrid g;
    g.values = Tensor({2, kNumParameters});
    FeatureScaler scaler = FeatureScaler::from_registry();
    g.values.at(0, kParamPulse) = scaler.scale(kParamPulse, 120.0);
    g.values.at(1, kParamPulse) = scaler.scale(kParamPulse, 80.0);
    g.mask.assign(2 * kNumParameters, false);
    g.mask[0 * kNumParameters + kParamPulse] = true; // only t=0 observed

    Admission adm;
    adm.admission_id = "a";
    adm.length_of_stay = 48.0;
    adm.events.push_back({1.0, kParamPulse, 80.0});
    adm.events.push_back({2.0, kParamPulse, 120.0});
    ValuePercentiles pct({adm});

    std::vector<LocalSummaryPoint> pts =
        local_summary({map}, {&g}, scaler, pct);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].parameter == kParamPulse);
    CHECK(pts[0].relevance == doctest::Approx(0.7));
    CHECK(pts[0].value == doctest::Approx(120.0).epsilon(1e-9));
    CHECK(pts[0].percentile == doctest::Approx(0.75));
}
