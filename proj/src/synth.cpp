#include "xews/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "xews/rng.hpp"

namespace xews {

namespace {

// Labs sampled on the faster cadence; the rest follow lab_interval_hours.
bool core_lab(int p) {
    return p == kParamCreatinine || p == kParamCrp || p == kParamPlatelets ||
           p == kParamLeukocytes || p == kParamLactateArterial;
}

struct RampSpec {
    int param;
    double delta;      // added at full ramp
    double lead_scale; // lead multiplier relative to the admission's base lead
};

// Linear rise from (onset - lead) to onset, held until onset + hold.
double ramp_fraction(double t, double onset, double lead, double hold) {
    if (t <= onset - lead) return 0.0;
    if (t >= onset) return t <= onset + hold ? 1.0 : std::max(0.0, 1.0 - (t - onset - hold) / 24.0);
    return (t - (onset - lead)) / lead;
}

struct Signature {
    bool active = false;
    double onset = 0.0;
    double lead = 0.0;
    double hold = 18.0;
    std::vector<RampSpec> ramps;

    double delta_for(int param, double t) const {
        if (!active) return 0.0;
        double d = 0.0;
        for (const RampSpec& r : ramps)
            if (r.param == param)
                d += r.delta * ramp_fraction(t, onset, lead * r.lead_scale, hold);
        return d;
    }
};

struct AdmissionPlan {
    bool sepsis = false, aki = false, ali = false;
    Signature sepsis_sig, aki_sig, ali_sig;
};

double truncated(double v, int param) {
    const ParameterInfo& info = parameter_table()[param];
    return std::clamp(v, info.low, info.high);
}

Admission build_admission(std::size_t index, const CohortSpec& spec,
                          const AdmissionPlan& plan, Rng rng) {
    Admission adm;
    adm.admission_id = "a" + std::to_string(index);
    adm.patient_id = "p" + std::to_string(index);
    adm.age = std::clamp(rng.normal(58.0, 18.0), 18.0, 100.0);
    adm.sex = rng.uniform() < 0.4586 ? 1 : 0;

    double los = spec.los_median_hours * std::exp(rng.normal(0.0, spec.los_log_sd));
    los = std::clamp(los, 48.0, 720.0);
    const bool any_positive = plan.sepsis || plan.aki || plan.ali;
    if (any_positive) los = std::max(los, 110.0);
    adm.length_of_stay = los;

    // Patient-level baseline offsets keep the cohort heterogeneous.
    std::array<double, kNumParameters> offset{};
    for (int p = 0; p < kNumParameters; ++p)
        offset[p] = rng.normal(0.0, 0.5 * parameter_table()[p].typical_sd);

    auto signature_delta = [&](int p, double t) {
        return plan.sepsis_sig.delta_for(p, t) + plan.aki_sig.delta_for(p, t) +
               plan.ali_sig.delta_for(p, t);
    };

    auto emit = [&](int p, double t) {
        if (t < 0.0 || t > los) return;
        const ParameterInfo& info = parameter_table()[p];
        // Within-admission noise is deliberately tighter than the population
        // spread so baseline fluctuation alone never crosses a label rule.
        double v = info.typical + offset[p] + rng.normal(0.0, 0.4 * info.typical_sd);
        v += signature_delta(p, t);
        adm.events.push_back({t, p, truncated(v, p)});
    };

    // Vitals measured together on a jittered cadence.
    for (double t = rng.uniform(0.25, 1.25); t < los;
         t += spec.vital_interval_hours + rng.uniform(-0.5, 0.5))
        for (int p = kParamSystolicBp; p < kNumParameters; ++p) emit(p, t);

    // Laboratory parameters on slower, per-parameter cadences.
    for (int p = 0; p < kParamSystolicBp; ++p) {
        const double interval =
            core_lab(p) ? spec.core_lab_interval_hours : spec.lab_interval_hours;
        for (double t = rng.uniform(0.5, interval); t < los;
             t += interval + rng.uniform(-1.0, 1.0))
            emit(p, t);
    }

    if (plan.sepsis) {
        const double onset = plan.sepsis_sig.onset;
        adm.events.push_back({onset, kCultureSample, 1.0});
        adm.events.push_back({std::min(los, onset + rng.uniform(1.0, 48.0)), kAntibiotic, 1.0});
        // Extra draws around onset so the SOFA rise is observed in-window.
        for (double dt : {2.0, 8.0, 14.0}) {
            emit(kParamPlatelets, onset + dt);
            emit(kParamLactateArterial, onset + dt);
        }
    }
    if (plan.aki) {
        const double onset = plan.aki_sig.onset;
        // The rule-firing jump: a fresh creatinine well above the ramp.
        for (double dt : {0.0, 10.0, 20.0}) {
            const double t = onset + dt;
            if (t > los) break;
            const ParameterInfo& info = parameter_table()[kParamCreatinine];
            const double v = info.typical + offset[kParamCreatinine] + 45.0 + dt +
                             rng.normal(0.0, 2.0);
            adm.events.push_back({t, kParamCreatinine, truncated(v, kParamCreatinine)});
        }
    }
    if (plan.ali) {
        const double onset = plan.ali_sig.onset;
        adm.events.push_back({onset, rng.uniform() < 0.5 ? kNiv : kCpap, 1.0});
        for (double dt : {-2.0, -1.0}) {
            emit(kParamSpo2, onset + dt);
            emit(kParamRespiratoryRate, onset + dt);
        }
    }
    if (!any_positive && rng.uniform() < 0.15) {
        // A lone antibiotic course; no culture, so no suspected infection.
        adm.events.push_back({rng.uniform(1.0, los), kAntibiotic, 1.0});
    }

    std::stable_sort(adm.events.begin(), adm.events.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    return adm;
}

AdmissionPlan make_plan(const CohortSpec& spec, bool sepsis, bool aki, bool ali, Rng& rng) {
    AdmissionPlan plan;
    plan.sepsis = sepsis;
    plan.aki = aki;
    plan.ali = ali;
    auto pick_onset = [&] { return rng.uniform(26.0, 80.0); };
    auto pick_lead = [&] {
        return rng.uniform(spec.signature_lead_min, spec.signature_lead_max);
    };
    if (sepsis) {
        plan.sepsis_sig.active = true;
        plan.sepsis_sig.onset = pick_onset();
        plan.sepsis_sig.lead = pick_lead();
        plan.sepsis_sig.ramps = {
            {kParamPlatelets, -165.0, 1.0},     {kParamLactateArterial, 3.5, 1.0},
            {kParamCrp, 120.0, 1.5},            {kParamLeukocytes, 7.0, 1.2},
            {kParamTemperature, 1.3, 1.0},      {kParamPulse, 25.0, 1.0},
            {kParamRespiratoryRate, 6.0, 1.0},  {kParamSystolicBp, -20.0, 1.0},
            {kParamDiastolicBp, -10.0, 1.0},
        };
    }
    if (aki) {
        plan.aki_sig.active = true;
        plan.aki_sig.onset = pick_onset();
        plan.aki_sig.lead = pick_lead();
        plan.aki_sig.ramps = {
            // Pre-onset creep stays below both KDIGO rules; the onset jump is
            // emitted separately in build_admission. The accompanying
            // deterioration phenotype lives on parameters no labeler reads at
            // rule strength, so it cannot flip a label.
            {kParamCreatinine, 20.0, 1.0},
            {kParamPulse, 22.0, 1.0},
            {kParamRespiratoryRate, 6.0, 1.0},
            {kParamSystolicBp, -16.0, 1.0},
            {kParamDiastolicBp, -8.0, 1.0},
            {kParamSpo2, -4.0, 1.0},
            {kParamCrp, 60.0, 1.3},
        };
    }
    if (ali) {
        plan.ali_sig.active = true;
        plan.ali_sig.onset = pick_onset();
        plan.ali_sig.lead = pick_lead();
        plan.ali_sig.ramps = {
            {kParamSpo2, -7.0, 1.0},
            {kParamRespiratoryRate, 9.0, 1.0},
            {kParamPo2Arterial, -22.0, 1.0},
            {kParamPulse, 12.0, 1.0},
        };
    }
    return plan;
}

} // namespace

std::vector<Admission> generate_cohort(const CohortSpec& spec) {
    if (spec.prevalence_sepsis < 0 || spec.prevalence_sepsis >= 1 ||
        spec.prevalence_aki < 0 || spec.prevalence_aki >= 1 ||
        spec.prevalence_ali < 0 || spec.prevalence_ali >= 1)
        throw std::invalid_argument("generate_cohort: prevalences must lie in [0,1)");

    const std::size_t n = spec.n_admissions;
    Rng master(spec.seed);

    // Exact positive counts per illness, assigned to seeded-shuffled indices.
    auto assign = [&](double prevalence, std::uint64_t stream) {
        std::vector<bool> flags(n, false);
        const std::size_t count =
            static_cast<std::size_t>(std::llround(prevalence * static_cast<double>(n)));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng = master.derive(stream);
        for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
        for (std::size_t i = 0; i < count && i < n; ++i) flags[idx[i]] = true;
        return flags;
    };
    const std::vector<bool> is_sepsis = assign(spec.prevalence_sepsis, 101);
    const std::vector<bool> is_aki = assign(spec.prevalence_aki, 202);
    const std::vector<bool> is_ali = assign(spec.prevalence_ali, 303);

    std::vector<Admission> cohort;
    cohort.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = false;
        for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
            Rng rng = master.derive(i * 1009 + attempt * 7919 + 1);
            AdmissionPlan plan = make_plan(spec, is_sepsis[i], is_aki[i], is_ali[i], rng);
            Admission adm = build_admission(i, spec, plan, rng);
            const AdmissionLabels labels = label_admission(adm);
            const bool match = labels.sepsis.positive == is_sepsis[i] &&
                               labels.aki.positive == is_aki[i] &&
                               labels.ali.positive == is_ali[i];
            bool onsets_ok = true;
            for (Illness ill : kIllnesses) {
                const LabelResult& r = labels.get(ill);
                if (r.positive && r.onset_time < 25.0) onsets_ok = false;
            }
            if (match && onsets_ok) {
                cohort.push_back(std::move(adm));
                ok = true;
                break;
            }
        }
        if (!ok)
            throw std::runtime_error(
                "generate_cohort: signature/labeler disagreement for admission " +
                std::to_string(i) + " after " + std::to_string(spec.max_attempts) +
                " attempts");
    }
    return cohort;
}

CohortSpec load_cohort_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cohort spec: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    CohortSpec s;
    s.n_admissions = j.value("n_admissions", s.n_admissions);
    s.prevalence_sepsis = j.value("prevalence_sepsis", s.prevalence_sepsis);
    s.prevalence_aki = j.value("prevalence_aki", s.prevalence_aki);
    s.prevalence_ali = j.value("prevalence_ali", s.prevalence_ali);
    s.los_median_hours = j.value("los_median_hours", s.los_median_hours);
    s.los_log_sd = j.value("los_log_sd", s.los_log_sd);
    s.vital_interval_hours = j.value("vital_interval_hours", s.vital_interval_hours);
    s.core_lab_interval_hours = j.value("core_lab_interval_hours", s.core_lab_interval_hours);
    s.lab_interval_hours = j.value("lab_interval_hours", s.lab_interval_hours);
    s.signature_lead_min = j.value("signature_lead_min", s.signature_lead_min);
    s.signature_lead_max = j.value("signature_lead_max", s.signature_lead_max);
    s.max_attempts = j.value("max_attempts", s.max_attempts);
    s.seed = j.value("seed", s.seed);
    return s;
}

void save_cohort_spec(const std::string& path, const CohortSpec& spec) {
    nlohmann::json j = {
        {"n_admissions", spec.n_admissions},
        {"prevalence_sepsis", spec.prevalence_sepsis},
        {"prevalence_aki", spec.prevalence_aki},
        {"prevalence_ali", spec.prevalence_ali},
        {"los_median_hours", spec.los_median_hours},
        {"los_log_sd", spec.los_log_sd},
        {"vital_interval_hours", spec.vital_interval_hours},
        {"core_lab_interval_hours", spec.core_lab_interval_hours},
        {"lab_interval_hours", spec.lab_interval_hours},
        {"signature_lead_min", spec.signature_lead_min},
        {"signature_lead_max", spec.signature_lead_max},
        {"max_attempts", spec.max_attempts},
        {"seed", spec.seed},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cohort spec: " + path);
    out << j.dump(1) << "\n";
}

} // namespace xews
