#pragma once

#include <optional>
#include <vector>

#include "xews/events.hpp"
#include "xews/rng.hpp"
#include "xews/tensor.hpp"

namespace xews {

// The 24x34 model input. `mask` is true where a bin held at least one
// observed event; imputation never touches the mask.
struct HourlyGrid {
    Tensor values;           // 24 x 34
    std::vector<bool> mask;  // 24*34, row-major, true = observed
    double window_end = 0.0; // hours since admission start

    HourlyGrid()
        : values({static_cast<std::size_t>(kNumTimesteps),
                  static_cast<std::size_t>(kNumParameters)}),
          mask(static_cast<std::size_t>(kNumTimesteps * kNumParameters), false) {}

    bool observed(int t, int p) const { return mask[t * kNumParameters + p]; }
    void set_observed(int t, int p, bool b) { mask[t * kNumParameters + p] = b; }
};

// Per-parameter min/max for scaling and median for cold-start imputation,
// learned from training folds only.
struct FeatureScaler {
    std::array<double, kNumParameters> min{};
    std::array<double, kNumParameters> max{};
    std::array<double, kNumParameters> median{};

    // Registry-backed defaults; used when a parameter has no training data.
    static FeatureScaler from_registry();

    double scale(int param, double v) const;
    double unscale(int param, double scaled) const;
};

// Bin b covers [window_end-24+b, window_end-23+b); events on a boundary go to
// the later bin. Cell = arithmetic mean over the bin. Bins that end at or
// before admission start stay masked off.
HourlyGrid bucket_hourly(const Admission& adm, double window_end);

// Carry-forward per column; bins before the first observation take the
// scaler's training median.
void impute(HourlyGrid& grid, const FeatureScaler& scaler);

FeatureScaler fit_scaler(const std::vector<Admission>& training);

// (v - min)/(max - min), clamped to [0, 1].
void apply_scaler(HourlyGrid& grid, const FeatureScaler& scaler);

// Full preprocessing chain: bucket, impute, scale.
HourlyGrid prepare_grid(const Admission& adm, double window_end, const FeatureScaler& scaler);

// Positives end the window at onset - horizon; negatives at a seeded uniform
// draw from [24, length_of_stay]. Returns nullopt when a positive's window
// would end before hour 1 (too early to observe anything).
std::optional<HourlyGrid> extract_window(const Admission& adm, bool positive,
                                         double onset_time, double horizon,
                                         const FeatureScaler& scaler, Rng& rng);

} // namespace xews
