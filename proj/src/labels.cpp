#include "xews/labels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace xews {

std::string to_string(Illness illness) {
    switch (illness) {
    case Illness::Sepsis: return "sepsis";
    case Illness::Aki: return "aki";
    case Illness::Ali: return "ali";
    }
    throw std::logic_error("unknown illness");
}

Illness illness_from_string(const std::string& s) {
    if (s == "sepsis") return Illness::Sepsis;
    if (s == "aki") return Illness::Aki;
    if (s == "ali") return Illness::Ali;
    throw std::invalid_argument("unknown illness: " + s);
}

namespace {

template <std::size_t N>
int score_decreasing(double v, const std::array<double, N>& bounds) {
    int score = 0;
    for (std::size_t i = 0; i < N; ++i)
        if (v < bounds[i]) score = static_cast<int>(i) + 1;
    return score;
}

template <std::size_t N>
int score_increasing(double v, const std::array<double, N>& bounds) {
    int score = 0;
    for (std::size_t i = 0; i < N; ++i)
        if (v >= bounds[i]) score = static_cast<int>(i) + 1;
    return score;
}

bool affects_sofa(int code) {
    return code == kParamPo2Arterial || code == kParamPlatelets ||
           code == kParamBilirubin || code == kParamSystolicBp ||
           code == kParamDiastolicBp || code == kParamCreatinine;
}

} // namespace

std::vector<SofaPoint> compute_sofa_series(const Admission& adm,
                                           const SofaThresholds& th) {
    // Carry-forward component inputs; missing components score 0.
    std::optional<double> po2, platelets, bilirubin, sys, dia, creatinine;
    std::vector<SofaPoint> series;

    auto evaluate = [&](double t) {
        SofaPoint p;
        p.time = t;
        if (po2) p.components[0] = score_decreasing(*po2 / 0.21, th.pf_ratio);
        if (platelets) p.components[1] = score_decreasing(*platelets, th.platelets);
        if (bilirubin) p.components[2] = score_increasing(*bilirubin, th.bilirubin);
        if (sys && dia) {
            const double map = (*sys + 2.0 * *dia) / 3.0;
            p.components[3] = map < th.map_low ? 1 : 0;
        }
        if (creatinine) p.components[4] = score_increasing(*creatinine, th.creatinine);
        p.total = 0;
        for (int c : p.components) p.total += c;
        return p;
    };

    for (std::size_t i = 0; i < adm.events.size(); ++i) {
        const Event& ev = adm.events[i];
        switch (ev.code) {
        case kParamPo2Arterial: po2 = ev.value; break;
        case kParamPlatelets: platelets = ev.value; break;
        case kParamBilirubin: bilirubin = ev.value; break;
        case kParamSystolicBp: sys = ev.value; break;
        case kParamDiastolicBp: dia = ev.value; break;
        case kParamCreatinine: creatinine = ev.value; break;
        default: continue;
        }
        // Collapse simultaneous component updates into one evaluation: emit
        // only after the last component-affecting event at this timestamp.
        bool more_at_same_time = false;
        for (std::size_t j = i + 1;
             j < adm.events.size() && adm.events[j].time == ev.time; ++j) {
            if (affects_sofa(adm.events[j].code)) {
                more_at_same_time = true;
                break;
            }
        }
        if (more_at_same_time) continue;
        series.push_back(evaluate(ev.time));
    }
    return series;
}

int sofa_at(const std::vector<SofaPoint>& series, double t) {
    int score = 0;
    for (const SofaPoint& p : series) {
        if (p.time > t) break;
        score = p.total;
    }
    return score;
}

std::vector<double> detect_suspected_infection(const Admission& adm) {
    std::vector<double> cultures, antibiotics;
    for (const Event& ev : adm.events) {
        if (ev.code == kCultureSample) cultures.push_back(ev.time);
        else if (ev.code == kAntibiotic) antibiotics.push_back(ev.time);
    }
    std::set<double> si;
    for (double c : cultures)
        for (double a : antibiotics) {
            if (a >= c && a - c <= kSiCultureFirstWindow) si.insert(c);
            if (a < c && c - a <= kSiAntibioticFirstWindow) si.insert(a);
        }
    return {si.begin(), si.end()};
}

LabelResult label_sepsis3(const Admission& adm, const SofaThresholds& th) {
    const std::vector<double> si_times = detect_suspected_infection(adm);
    if (si_times.empty()) return {};
    const std::vector<SofaPoint> sofa = compute_sofa_series(adm, th);

    for (double si : si_times) {
        const double lo = si - kSepsisWindowBefore;
        const double hi = si + kSepsisWindowAfter;
        // Window baseline: carry-forward score at the window start, then the
        // running minimum as the window progresses.
        int running_min = sofa_at(sofa, lo);
        bool fired = false;
        for (const SofaPoint& p : sofa) {
            if (p.time < lo || p.time > hi) {
                if (p.time > hi) break;
                continue;
            }
            if (p.total - running_min >= 2) {
                fired = true;
                break;
            }
            running_min = std::min(running_min, p.total);
        }
        if (fired) {
            LabelResult r;
            r.positive = true;
            r.onset_time = si;
            return r;
        }
    }
    return {};
}

LabelResult label_kdigo_aki(const Admission& adm) {
    struct Meas {
        double time;
        double value;
    };
    std::vector<Meas> creat;
    for (const Event& ev : adm.events)
        if (ev.code == kParamCreatinine) creat.push_back({ev.time, ev.value});
    if (creat.empty()) {
        LabelResult r;
        r.flagged = true; // unlabelable: no creatinine measurements
        return r;
    }

    LabelResult r;
    r.flagged = true; // no 365-day history: habitual falls back to first value
    for (std::size_t j = 0; j < creat.size(); ++j) {
        // Rule 1: rise >= 26.5 umol/l within 48 h.
        for (std::size_t i = 0; i < j; ++i) {
            if (creat[j].time - creat[i].time <= kKdigoDeltaWindow &&
                creat[j].value - creat[i].value >= kKdigoDeltaUmol) {
                r.positive = true;
                r.onset_time = creat[j].time;
                return r;
            }
        }
        // Rule 2: >= 1.5x the habitual level (mean over the previous 365
        // days; the first measurement serves as its own baseline).
        double habitual = creat[0].value;
        if (j > 0) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < j; ++i) {
                if (creat[j].time - creat[i].time <= 365.0 * 24.0) {
                    sum += creat[i].value;
                    ++n;
                }
            }
            if (n > 0) habitual = sum / static_cast<double>(n);
        }
        if (j > 0 && habitual > 0 && creat[j].value >= kKdigoRatio * habitual) {
            r.positive = true;
            r.onset_time = creat[j].time;
            return r;
        }
    }
    r.positive = false;
    return r;
}

LabelResult label_ali(const Admission& adm) {
    double onset = std::numeric_limits<double>::infinity();
    for (const Event& ev : adm.events)
        if (ev.code == kNiv || ev.code == kCpap) onset = std::min(onset, ev.time);
    LabelResult r;
    if (std::isfinite(onset)) {
        r.positive = true;
        r.onset_time = onset;
    }
    return r;
}

AdmissionLabels label_admission(const Admission& adm, const SofaThresholds& th) {
    AdmissionLabels labels;
    labels.sepsis = label_sepsis3(adm, th);
    labels.aki = label_kdigo_aki(adm);
    labels.ali = label_ali(adm);
    return labels;
}

} // namespace xews
