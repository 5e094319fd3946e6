#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "xews/events.hpp"

namespace xews {

enum class Illness { Sepsis, Aki, Ali };
constexpr std::array<Illness, 3> kIllnesses = {Illness::Sepsis, Illness::Aki, Illness::Ali};

std::string to_string(Illness illness);
Illness illness_from_string(const std::string& s);

struct LabelResult {
    bool positive = false;
    double onset_time = 0.0; // valid iff positive
    bool flagged = false;    // e.g. KDIGO habitual level fell back to first value
};

// SOFA components, in order: respiration, coagulation, liver, cardiovascular,
// renal. CNS is omitted (no consciousness data stream).
constexpr int kSofaComponents = 5;

struct SofaPoint {
    double time = 0.0;
    std::array<int, kSofaComponents> components{};
    int total = 0;
};

// Subscore thresholds; editable config. A value at or past thresholds[i]
// (in the deranged direction) scores i+1.
struct SofaThresholds {
    // PaO2/FiO2 (mmHg), FiO2 assumed 0.21; decreasing severity bounds.
    std::array<double, 4> pf_ratio = {400.0, 300.0, 200.0, 100.0};
    // Platelets 1e9/l, decreasing.
    std::array<double, 4> platelets = {150.0, 100.0, 50.0, 20.0};
    // Bilirubin umol/l, increasing lower bounds.
    std::array<double, 4> bilirubin = {20.0, 33.0, 102.0, 205.0};
    // Mean arterial pressure mmHg; no vasopressor data, so the component is
    // capped at 1.
    double map_low = 70.0;
    // Creatinine umol/l, increasing lower bounds.
    std::array<double, 4> creatinine = {110.0, 171.0, 300.0, 441.0};

    static SofaThresholds defaults() { return {}; }
};

// Score series evaluated at every event time that can change a component,
// with carry-forward between measurements.
std::vector<SofaPoint> compute_sofa_series(const Admission& adm,
                                           const SofaThresholds& thresholds = {});

// SOFA total as of time t (carry-forward; 0 before the first point).
int sofa_at(const std::vector<SofaPoint>& series, double t);

// Suspected-infection times: culture-first pairs accept an antibiotic within
// 72 h; antibiotic-first pairs accept a culture within 24 h. SI time is the
// earlier event of the pair.
std::vector<double> detect_suspected_infection(const Admission& adm);

// Sepsis-3: some SI time has a SOFA increase >= 2 inside [SI-48, SI+24],
// measured against the running window minimum. Onset = SI time.
LabelResult label_sepsis3(const Admission& adm, const SofaThresholds& thresholds = {});

// KDIGO, rules 1 and 2 only, binary. Habitual level = mean creatinine over
// the previous 365 days; with no history it falls back to the first
// in-admission value (flagged).
LabelResult label_kdigo_aki(const Admission& adm);

// First NIV or CPAP event.
LabelResult label_ali(const Admission& adm);

struct AdmissionLabels {
    LabelResult sepsis;
    LabelResult aki;
    LabelResult ali;

    const LabelResult& get(Illness illness) const {
        switch (illness) {
        case Illness::Sepsis: return sepsis;
        case Illness::Aki: return aki;
        default: return ali;
        }
    }
};

AdmissionLabels label_admission(const Admission& adm, const SofaThresholds& thresholds = {});

constexpr double kKdigoDeltaUmol = 26.5;   // rule 1: rise within 48 h
constexpr double kKdigoDeltaWindow = 48.0;
constexpr double kKdigoRatio = 1.5;        // rule 2: vs habitual level
constexpr double kSiCultureFirstWindow = 72.0;
constexpr double kSiAntibioticFirstWindow = 24.0;
constexpr double kSepsisWindowBefore = 48.0;
constexpr double kSepsisWindowAfter = 24.0;

} // namespace xews
