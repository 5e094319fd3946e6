#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "xews/labels.hpp"
#include "xews/rng.hpp"

using namespace xews;

namespace {

Admission adm_with(std::vector<Event> events, double los = 200.0) {
    Admission a;
    a.admission_id = "a";
    a.length_of_stay = los;
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& x, const Event& y) { return x.time < y.time; });
    a.events = std::move(events);
    return a;
}

} // namespace

TEST_CASE("SOFA subscores: worked examples per component") {
    // Single-measurement admissions; the series has one point whose total is
    // the component score.
    auto total_for = [](int code, double value) {
        auto s = compute_sofa_series(adm_with({{10.0, code, value}}));
        REQUIRE(s.size() == 1);
        return s[0].total;
    };
    CHECK(total_for(kParamPlatelets, 200.0) == 0);
    CHECK(total_for(kParamPlatelets, 90.0) == 2);
    CHECK(total_for(kParamPlatelets, 45.0) == 3);
    CHECK(total_for(kParamPlatelets, 15.0) == 4);
    CHECK(total_for(kParamCreatinine, 100.0) == 0);
    CHECK(total_for(kParamCreatinine, 110.0) == 1);
    CHECK(total_for(kParamCreatinine, 221.0) == 2);
    CHECK(total_for(kParamCreatinine, 441.0) == 4);
    CHECK(total_for(kParamBilirubin, 19.0) == 0);
    CHECK(total_for(kParamBilirubin, 33.0) == 2);
    CHECK(total_for(kParamBilirubin, 205.0) == 4);
    // PaO2 63 mmHg / 0.21 = 300 exactly: only the <400 band fires.
    CHECK(total_for(kParamPo2Arterial, 63.0) == 1);
    CHECK(total_for(kParamPo2Arterial, 100.0) == 0);
}

TEST_CASE("SOFA cardiovascular needs both pressures and caps at 1") {
    // Systolic alone scores nothing.
    auto s1 = compute_sofa_series(adm_with({{5.0, kParamSystolicBp, 80.0}}));
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].total == 0);
    // MAP = (100 + 2*50)/3 = 66.7 < 70 -> 1.
    auto s2 = compute_sofa_series(
        adm_with({{5.0, kParamSystolicBp, 100.0}, {6.0, kParamDiastolicBp, 50.0}}));
    CHECK(s2.back().total == 1);
    // Healthy MAP scores 0.
    auto s3 = compute_sofa_series(
        adm_with({{5.0, kParamSystolicBp, 120.0}, {6.0, kParamDiastolicBp, 80.0}}));
    CHECK(s3.back().total == 0);
}

TEST_CASE("SOFA series: carry-forward and simultaneous collapse") {
    Admission a = adm_with({{10.0, kParamPlatelets, 90.0},
                            {20.0, kParamCreatinine, 350.0},
                            {20.0, kParamPlatelets, 200.0}});
    auto s = compute_sofa_series(a);
    REQUIRE(s.size() == 2);
    CHECK(s[0].total == 2); // platelets 90
    CHECK(s[1].total == 3); // creatinine 350 (3) + platelets 200 (0), one point
    CHECK(sofa_at(s, 5.0) == 0);
    CHECK(sofa_at(s, 10.0) == 2);
    CHECK(sofa_at(s, 15.0) == 2);
    CHECK(sofa_at(s, 25.0) == 3);
}

TEST_CASE("suspected infection pairing windows") {
    // Culture first: antibiotic within 72 h qualifies, SI = culture time.
    auto si1 = detect_suspected_infection(
        adm_with({{10.0, kCultureSample, 1.0}, {30.0, kAntibiotic, 1.0}}));
    CHECK(si1 == std::vector<double>{10.0});
    // Culture first, gap beyond 72 h: no SI.
    CHECK(detect_suspected_infection(
              adm_with({{10.0, kCultureSample, 1.0}, {90.0, kAntibiotic, 1.0}}, 300.0))
              .empty());
    // Antibiotic first: culture within 24 h qualifies, SI = antibiotic time.
    auto si2 = detect_suspected_infection(
        adm_with({{10.0, kAntibiotic, 1.0}, {30.0, kCultureSample, 1.0}}));
    CHECK(si2 == std::vector<double>{10.0});
    // Antibiotic first, gap 30 h: rejected.
    CHECK(detect_suspected_infection(
              adm_with({{10.0, kAntibiotic, 1.0}, {40.0, kCultureSample, 1.0}}))
              .empty());
}

TEST_CASE("sepsis-3: SOFA rise >= 2 near SI fires, onset is the SI time") {
    Admission a = adm_with({{50.0, kCultureSample, 1.0},
                            {52.0, kAntibiotic, 1.0},
                            {60.0, kParamPlatelets, 90.0}});
    LabelResult r = label_sepsis3(a);
    CHECK(r.positive);
    CHECK(r.onset_time == 50.0);
}

TEST_CASE("sepsis-3: rise measured against the running window minimum") {
    // Baseline 2 before the window, drops to 0 inside it, climbs back to 2:
    // 2 - 0 >= 2 fires even though the endpoints match.
    Admission a = adm_with({{1.0, kParamPlatelets, 90.0}, // SOFA 2 long before SI
                            {100.0, kCultureSample, 1.0},
                            {101.0, kAntibiotic, 1.0},
                            {110.0, kParamPlatelets, 300.0}, // 0
                            {120.0, kParamPlatelets, 90.0}}, // back to 2
                           300.0);
    LabelResult r = label_sepsis3(a);
    CHECK(r.positive);
    CHECK(r.onset_time == 100.0);
}

TEST_CASE("sepsis-3: no SI or rise outside the window stays negative") {
    // Rise with no SI.
    CHECK_FALSE(label_sepsis3(adm_with({{10.0, kParamPlatelets, 40.0}})).positive);
    // SI whose window misses the deterioration entirely.
    Admission a = adm_with({{10.0, kCultureSample, 1.0},
                            {12.0, kAntibiotic, 1.0},
                            {150.0, kParamPlatelets, 40.0}},
                           300.0);
    CHECK_FALSE(label_sepsis3(a).positive);
}

TEST_CASE("KDIGO rule 1: rise >= 26.5 umol/l within 48 h") {
    Admission a = adm_with({{10.0, kParamCreatinine, 80.0},
                            {40.0, kParamCreatinine, 110.0}});
    LabelResult r = label_kdigo_aki(a);
    CHECK(r.positive);
    CHECK(r.onset_time == 40.0);
    CHECK(r.flagged); // habitual level had to fall back to in-admission data

    // Same rise spread over 49 h does not fire rule 1 (nor rule 2).
    Admission b = adm_with({{0.0, kParamCreatinine, 80.0},
                            {49.0, kParamCreatinine, 110.0}});
    CHECK_FALSE(label_kdigo_aki(b).positive);
}

TEST_CASE("KDIGO rule 2: 1.5x the mean of earlier measurements") {
    // Deltas stay under 26.5 but the second value is 2x the habitual level.
    Admission a = adm_with({{0.0, kParamCreatinine, 20.0},
                            {49.0, kParamCreatinine, 40.0}});
    LabelResult r = label_kdigo_aki(a);
    CHECK(r.positive);
    CHECK(r.onset_time == 49.0);
}

TEST_CASE("KDIGO: single or missing creatinine stays negative and flagged") {
    LabelResult one = label_kdigo_aki(adm_with({{10.0, kParamCreatinine, 300.0}}));
    CHECK_FALSE(one.positive);
    CHECK(one.flagged);
    LabelResult none = label_kdigo_aki(adm_with({{10.0, kParamPulse, 90.0}}));
    CHECK_FALSE(none.positive);
    CHECK(none.flagged);
}

TEST_CASE("ALI: first NIV or CPAP event") {
    Admission a = adm_with({{30.0, kNiv, 1.0}, {20.0, kCpap, 1.0}});
    LabelResult r = label_ali(a);
    CHECK(r.positive);
    CHECK(r.onset_time == 20.0);
    CHECK_FALSE(label_ali(adm_with({{10.0, kParamPulse, 90.0}})).positive);
}

// ---------------------------------------------------------------------------
// Brute-force oracles, written independently of the production code paths.

namespace {

int oracle_sofa_total(const Admission& adm, double t, const SofaThresholds& th) {
    // Latest measurement of each input at or before t.
    std::optional<double> po2, plt, bili, sys, dia, cre;
    for (const Event& ev : adm.events) {
        if (ev.time > t) continue;
        switch (ev.code) {
        case kParamPo2Arterial: po2 = ev.value; break;
        case kParamPlatelets: plt = ev.value; break;
        case kParamBilirubin: bili = ev.value; break;
        case kParamSystolicBp: sys = ev.value; break;
        case kParamDiastolicBp: dia = ev.value; break;
        case kParamCreatinine: cre = ev.value; break;
        default: break;
        }
    }
    int total = 0;
    if (po2) {
        const double pf = *po2 / 0.21;
        total += pf < th.pf_ratio[3] ? 4 : pf < th.pf_ratio[2] ? 3
                 : pf < th.pf_ratio[1] ? 2 : pf < th.pf_ratio[0] ? 1 : 0;
    }
    if (plt)
        total += *plt < th.platelets[3] ? 4 : *plt < th.platelets[2] ? 3
                 : *plt < th.platelets[1] ? 2 : *plt < th.platelets[0] ? 1 : 0;
    if (bili)
        total += *bili >= th.bilirubin[3] ? 4 : *bili >= th.bilirubin[2] ? 3
                 : *bili >= th.bilirubin[1] ? 2 : *bili >= th.bilirubin[0] ? 1 : 0;
    if (sys && dia && (*sys + 2.0 * *dia) / 3.0 < th.map_low) total += 1;
    if (cre)
        total += *cre >= th.creatinine[3] ? 4 : *cre >= th.creatinine[2] ? 3
                 : *cre >= th.creatinine[1] ? 2 : *cre >= th.creatinine[0] ? 1 : 0;
    return total;
}

bool oracle_sepsis(const Admission& adm, double& onset) {
    const SofaThresholds th;
    std::set<double> sis;
    for (const Event& c : adm.events) {
        if (c.code != kCultureSample) continue;
        for (const Event& a : adm.events) {
            if (a.code != kAntibiotic) continue;
            if (a.time >= c.time && a.time - c.time <= 72.0) sis.insert(c.time);
            if (a.time < c.time && c.time - a.time <= 24.0) sis.insert(a.time);
        }
    }
    std::set<double> change_times;
    for (const Event& ev : adm.events)
        if (ev.code == kParamPo2Arterial || ev.code == kParamPlatelets ||
            ev.code == kParamBilirubin || ev.code == kParamSystolicBp ||
            ev.code == kParamDiastolicBp || ev.code == kParamCreatinine)
            change_times.insert(ev.time);
    for (double si : sis) {
        const double lo = si - 48.0, hi = si + 24.0;
        int running_min = oracle_sofa_total(adm, lo, th);
        for (double t : change_times) {
            if (t < lo || t > hi) continue;
            const int total = oracle_sofa_total(adm, t, th);
            if (total - running_min >= 2) {
                onset = si;
                return true;
            }
            running_min = std::min(running_min, total);
        }
    }
    return false;
}

bool oracle_kdigo(const Admission& adm, double& onset) {
    std::vector<std::pair<double, double>> c;
    for (const Event& ev : adm.events)
        if (ev.code == kParamCreatinine) c.push_back({ev.time, ev.value});
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i)
            if (c[j].first - c[i].first <= 48.0 && c[j].second - c[i].second >= 26.5) {
                onset = c[j].first;
                return true;
            }
        if (j > 0) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < j; ++i)
                if (c[j].first - c[i].first <= 365.0 * 24.0) {
                    sum += c[i].second;
                    ++n;
                }
            const double habitual = n > 0 ? sum / n : c[0].second;
            if (habitual > 0 && c[j].second >= 1.5 * habitual) {
                onset = c[j].first;
                return true;
            }
        }
    }
    return false;
}

bool oracle_ali(const Admission& adm, double& onset) {
    for (const Event& ev : adm.events) // events are sorted by time
        if (ev.code == kNiv || ev.code == kCpap) {
            onset = ev.time;
            return true;
        }
    return false;
}

Admission random_admission(Rng& rng) {
    const int codes[] = {kParamPo2Arterial, kParamPlatelets,  kParamBilirubin,
                         kParamSystolicBp,  kParamDiastolicBp, kParamCreatinine,
                         kParamPulse,       kCultureSample,   kAntibiotic,
                         kNiv,              kCpap};
    std::vector<Event> events;
    const std::size_t n = rng.below(21);
    for (std::size_t i = 0; i < n; ++i) {
        Event ev;
        ev.time = rng.uniform(0.0, 200.0);
        ev.code = codes[rng.below(std::size(codes))];
        switch (ev.code) {
        case kParamPo2Arterial: ev.value = rng.uniform(20.0, 120.0); break;
        case kParamPlatelets: ev.value = rng.uniform(5.0, 400.0); break;
        case kParamBilirubin: ev.value = rng.uniform(3.0, 300.0); break;
        case kParamSystolicBp: ev.value = rng.uniform(60.0, 180.0); break;
        case kParamDiastolicBp: ev.value = rng.uniform(30.0, 110.0); break;
        case kParamCreatinine: ev.value = rng.uniform(30.0, 500.0); break;
        case kParamPulse: ev.value = rng.uniform(40.0, 160.0); break;
        default: ev.value = 1.0; break;
        }
        events.push_back(ev);
    }
    return adm_with(std::move(events));
}

} // namespace

TEST_CASE("labelers agree with brute-force oracles on 10000 random admissions") {
    Rng rng(20260826);
    for (int rep = 0; rep < 10000; ++rep) {
        Admission adm = random_admission(rng);
        AdmissionLabels got = label_admission(adm);

        double onset = 0.0;
        const bool sep = oracle_sepsis(adm, onset);
        REQUIRE(got.sepsis.positive == sep);
        if (sep) REQUIRE(got.sepsis.onset_time == onset);

        const bool aki = oracle_kdigo(adm, onset);
        REQUIRE(got.aki.positive == aki);
        if (aki) REQUIRE(got.aki.onset_time == onset);

        const bool ali = oracle_ali(adm, onset);
        REQUIRE(got.ali.positive == ali);
        if (ali) REQUIRE(got.ali.onset_time == onset);
    }
}

TEST_CASE("labels are invariant to the stored order of same-time events") {
    Rng rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        Admission adm = random_admission(rng);
        AdmissionLabels base = label_admission(adm);
        // Reverse then re-stable-sort: same times, different tie order for
        // events of distinct parameters (same-parameter ties are not
        // generated here).
        Admission shuffled = adm;
        std::reverse(shuffled.events.begin(), shuffled.events.end());
        std::stable_sort(shuffled.events.begin(), shuffled.events.end(),
                         [](const Event& x, const Event& y) { return x.time < y.time; });
        AdmissionLabels again = label_admission(shuffled);
        for (Illness ill : kIllnesses) {
            CHECK(base.get(ill).positive == again.get(ill).positive);
            if (base.get(ill).positive)
                CHECK(base.get(ill).onset_time == again.get(ill).onset_time);
        }
    }
}
