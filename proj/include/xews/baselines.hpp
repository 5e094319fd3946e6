#pragma once

#include <array>
#include <vector>

#include "xews/events.hpp"
#include "xews/gbm.hpp"
#include "xews/labels.hpp"

namespace xews {

// One MIN-open scoring band: value < upper scores `score`; the last band has
// upper = +inf. Bands partition the real line per vital.
struct MewsBand {
    double upper;
    int score;
};

// Danish early-warning variant (TOKS-style) over five vitals. Default bands
// below are editable config, not ground truth.
struct MewsTable {
    std::vector<MewsBand> systolic_bp;
    std::vector<MewsBand> pulse;
    std::vector<MewsBand> respiratory_rate;
    std::vector<MewsBand> temperature;
    std::vector<MewsBand> spo2;

    static MewsTable defaults();
};

int mews_band_score(const std::vector<MewsBand>& bands, double value);

// Sum of subscores over the five vitals at carry-forward values as of t;
// missing vitals score 0.
int compute_mews(const Admission& adm, double t, const MewsTable& table = MewsTable::defaults());

// SOFA total as of t (carry-forward), used directly as a risk score.
int sofa_risk(const Admission& adm, double t, const SofaThresholds& thresholds = {});

constexpr int kGbVitalCount = 30; // 6 vitals x 5 engineered parameters

// Per vital: mean of the current hour, the prior hour, the hour before that,
// and the two successive trends. Missing hours are carried forward from the
// latest earlier observation, else filled with the vital's median (trend 0).
std::array<double, kGbVitalCount> build_gbvital_features(
    const Admission& adm, double window_end,
    const std::array<double, 6>& vital_medians);

// The six vitals' grid column indices, feature order.
const std::array<int, 6>& gbvital_columns();

// Training-fold medians for the six vitals.
std::array<double, 6> fit_vital_medians(const std::vector<Admission>& training);

} // namespace xews
