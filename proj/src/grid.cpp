#include "xews/grid.hpp"

#include <algorithm>
#include <cmath>

namespace xews {

FeatureScaler FeatureScaler::from_registry() {
    FeatureScaler s;
    const auto& table = parameter_table();
    for (int p = 0; p < kNumParameters; ++p) {
        s.min[p] = table[p].low;
        s.max[p] = table[p].high;
        s.median[p] = table[p].typical;
    }
    return s;
}

double FeatureScaler::scale(int param, double v) const {
    const double span = max[param] - min[param];
    if (span <= 0.0) return 0.0;
    return std::clamp((v - min[param]) / span, 0.0, 1.0);
}

double FeatureScaler::unscale(int param, double scaled) const {
    return min[param] + scaled * (max[param] - min[param]);
}

HourlyGrid bucket_hourly(const Admission& adm, double window_end) {
    HourlyGrid grid;
    grid.window_end = window_end;
    const double window_start = window_end - kNumTimesteps;

    std::array<std::array<double, kNumParameters>, kNumTimesteps> sums{};
    std::array<std::array<int, kNumParameters>, kNumTimesteps> counts{};

    for (const Event& ev : adm.events) {
        if (ev.code >= kNumParameters) continue; // labeling-only events
        if (ev.time < window_start || ev.time >= window_end) continue;
        const int b = static_cast<int>(std::floor(ev.time - window_start));
        if (b < 0 || b >= kNumTimesteps) continue;
        sums[b][ev.code] += ev.value;
        counts[b][ev.code] += 1;
    }
    for (int t = 0; t < kNumTimesteps; ++t) {
        for (int p = 0; p < kNumParameters; ++p) {
            if (counts[t][p] > 0) {
                grid.values.at(t, p) = sums[t][p] / counts[t][p];
                grid.set_observed(t, p, true);
            }
        }
    }
    return grid;
}

void impute(HourlyGrid& grid, const FeatureScaler& scaler) {
    for (int p = 0; p < kNumParameters; ++p) {
        bool seen = false;
        double last = 0.0;
        for (int t = 0; t < kNumTimesteps; ++t) {
            if (grid.observed(t, p)) {
                last = grid.values.at(t, p);
                seen = true;
            } else {
                grid.values.at(t, p) = seen ? last : scaler.median[p];
            }
        }
    }
}

FeatureScaler fit_scaler(const std::vector<Admission>& training) {
    FeatureScaler s = FeatureScaler::from_registry();
    std::array<std::vector<double>, kNumParameters> seen;
    for (const Admission& adm : training)
        for (const Event& ev : adm.events)
            if (ev.code < kNumParameters) seen[ev.code].push_back(ev.value);
    for (int p = 0; p < kNumParameters; ++p) {
        auto& vals = seen[p];
        if (vals.empty()) continue; // keep registry defaults
        std::sort(vals.begin(), vals.end());
        const double lo = vals.front();
        const double hi = vals.back();
        if (hi > lo) {
            s.min[p] = lo;
            s.max[p] = hi;
        }
        s.median[p] = vals[vals.size() / 2];
    }
    return s;
}

void apply_scaler(HourlyGrid& grid, const FeatureScaler& scaler) {
    for (int t = 0; t < kNumTimesteps; ++t)
        for (int p = 0; p < kNumParameters; ++p)
            grid.values.at(t, p) = scaler.scale(p, grid.values.at(t, p));
}

HourlyGrid prepare_grid(const Admission& adm, double window_end, const FeatureScaler& scaler) {
    HourlyGrid grid = bucket_hourly(adm, window_end);
    impute(grid, scaler);
    apply_scaler(grid, scaler);
    return grid;
}

std::optional<HourlyGrid> extract_window(const Admission& adm, bool positive,
                                         double onset_time, double horizon,
                                         const FeatureScaler& scaler, Rng& rng) {
    double window_end;
    if (positive) {
        window_end = onset_time - horizon;
        if (window_end < 1.0) return std::nullopt;
    } else {
        const double hi = std::max(24.0, adm.length_of_stay);
        window_end = rng.uniform(24.0, hi == 24.0 ? 24.0 + 1e-9 : hi);
    }
    return prepare_grid(adm, window_end, scaler);
}

} // namespace xews
