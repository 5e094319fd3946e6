#include "xews/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace xews {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MewsTable MewsTable::defaults() {
    MewsTable t;
    t.systolic_bp = {{71, 3}, {81, 2}, {101, 1}, {200, 0}, {kInf, 2}};
    t.pulse = {{40, 3}, {51, 1}, {101, 0}, {111, 1}, {130, 2}, {kInf, 3}};
    t.respiratory_rate = {{9, 3}, {12, 1}, {21, 0}, {25, 2}, {kInf, 3}};
    t.temperature = {{35.0, 3}, {36.1, 1}, {38.1, 0}, {38.6, 1}, {kInf, 2}};
    t.spo2 = {{85, 3}, {90, 2}, {93, 1}, {kInf, 0}};
    return t;
}

int mews_band_score(const std::vector<MewsBand>& bands, double value) {
    for (const MewsBand& b : bands)
        if (value < b.upper) return b.score;
    return bands.back().score;
}

int compute_mews(const Admission& adm, double t, const MewsTable& table) {
    std::optional<double> sys, pulse, rr, temp, spo2;
    for (const Event& ev : adm.events) {
        if (ev.time > t) break;
        switch (ev.code) {
        case kParamSystolicBp: sys = ev.value; break;
        case kParamPulse: pulse = ev.value; break;
        case kParamRespiratoryRate: rr = ev.value; break;
        case kParamTemperature: temp = ev.value; break;
        case kParamSpo2: spo2 = ev.value; break;
        default: break;
        }
    }
    int score = 0;
    if (sys) score += mews_band_score(table.systolic_bp, *sys);
    if (pulse) score += mews_band_score(table.pulse, *pulse);
    if (rr) score += mews_band_score(table.respiratory_rate, *rr);
    if (temp) score += mews_band_score(table.temperature, *temp);
    if (spo2) score += mews_band_score(table.spo2, *spo2);
    return score;
}

int sofa_risk(const Admission& adm, double t, const SofaThresholds& thresholds) {
    return sofa_at(compute_sofa_series(adm, thresholds), t);
}

const std::array<int, 6>& gbvital_columns() {
    static const std::array<int, 6> cols = {kParamSystolicBp, kParamDiastolicBp,
                                            kParamPulse,      kParamRespiratoryRate,
                                            kParamSpo2,       kParamTemperature};
    return cols;
}

std::array<double, kGbVitalCount> build_gbvital_features(
    const Admission& adm, double window_end, const std::array<double, 6>& vital_medians) {
    std::array<double, kGbVitalCount> out{};
    for (std::size_t v = 0; v < 6; ++v) {
        const int code = gbvital_columns()[v];
        // Hourly means for [end-1,end), [end-2,end-1), [end-3,end-2).
        std::array<double, 3> mean{};
        std::array<bool, 3> have{};
        for (int h = 0; h < 3; ++h) {
            const double lo = window_end - (h + 1);
            const double hi = window_end - h;
            double sum = 0.0;
            int n = 0;
            for (const Event& ev : adm.events) {
                if (ev.code != code) continue;
                if (ev.time >= lo && ev.time < hi) {
                    sum += ev.value;
                    ++n;
                }
            }
            if (n > 0) {
                mean[h] = sum / n;
                have[h] = true;
            }
        }
        // Carry-forward from the latest observation before the missing hour,
        // then median.
        for (int h = 0; h < 3; ++h) {
            if (have[h]) continue;
            double carry = vital_medians[v];
            double best_t = -kInf;
            for (const Event& ev : adm.events) {
                if (ev.code != code) continue;
                if (ev.time < window_end - h && ev.time > best_t) {
                    best_t = ev.time;
                    carry = ev.value;
                }
            }
            mean[h] = carry;
        }
        out[v * 5 + 0] = mean[0];
        out[v * 5 + 1] = mean[1];
        out[v * 5 + 2] = mean[2];
        out[v * 5 + 3] = mean[0] - mean[1];
        out[v * 5 + 4] = mean[1] - mean[2];
    }
    return out;
}

std::array<double, 6> fit_vital_medians(const std::vector<Admission>& training) {
    std::array<std::vector<double>, 6> values;
    for (const Admission& adm : training) {
        for (const Event& ev : adm.events) {
            for (std::size_t v = 0; v < 6; ++v)
                if (ev.code == gbvital_columns()[v]) values[v].push_back(ev.value);
        }
    }
    std::array<double, 6> medians{};
    for (std::size_t v = 0; v < 6; ++v) {
        if (values[v].empty()) {
            medians[v] = parameter_table()[gbvital_columns()[v]].typical;
        } else {
            std::sort(values[v].begin(), values[v].end());
            medians[v] = values[v][values[v].size() / 2];
        }
    }
    return medians;
}

} // namespace xews
