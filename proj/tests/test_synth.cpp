#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "xews/synth.hpp"

using namespace xews;

namespace {

CohortSpec small_spec(std::size_t n, std::uint64_t seed) {
    CohortSpec s;
    s.n_admissions = n;
    s.seed = seed;
    return s;
}

bool same_admission(const Admission& a, const Admission& b) {
    if (a.admission_id != b.admission_id || a.patient_id != b.patient_id ||
        a.length_of_stay != b.length_of_stay || a.age != b.age || a.sex != b.sex ||
        a.events.size() != b.events.size())
        return false;
    for (std::size_t i = 0; i < a.events.size(); ++i)
        if (a.events[i].time != b.events[i].time || a.events[i].code != b.events[i].code ||
            a.events[i].value != b.events[i].value)
            return false;
    return true;
}

} // namespace

TEST_CASE("zero prevalence yields an all-negative cohort") {
    CohortSpec s = small_spec(50, 4);
    s.prevalence_sepsis = s.prevalence_aki = s.prevalence_ali = 0.0;
    auto cohort = generate_cohort(s);
    REQUIRE(cohort.size() == 50);
    for (const Admission& adm : cohort) {
        const AdmissionLabels labels = label_admission(adm);
        CHECK_FALSE(labels.sepsis.positive);
        CHECK_FALSE(labels.aki.positive);
        CHECK_FALSE(labels.ali.positive);
    }
}

TEST_CASE("generation is deterministic in the seed") {
    CohortSpec s = small_spec(30, 99);
    s.prevalence_sepsis = 0.2;
    s.prevalence_aki = 0.1;
    s.prevalence_ali = 0.1;
    auto a = generate_cohort(s);
    auto b = generate_cohort(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_admission(a[i], b[i]));

    s.seed = 100;
    auto c = generate_cohort(s);
    bool all_same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_admission(a[i], c[i])) all_same = false;
    CHECK_FALSE(all_same);
}

TEST_CASE("positive counts are exact and labels re-verify") {
    CohortSpec s = small_spec(200, 12);
    s.prevalence_sepsis = 0.10; // 20 positives
    s.prevalence_aki = 0.05;    // 10
    s.prevalence_ali = 0.075;   // 15
    auto cohort = generate_cohort(s);
    REQUIRE(cohort.size() == 200);
    int n_sepsis = 0, n_aki = 0, n_ali = 0;
    for (const Admission& adm : cohort) {
        const AdmissionLabels labels = label_admission(adm);
        n_sepsis += labels.sepsis.positive;
        n_aki += labels.aki.positive;
        n_ali += labels.ali.positive;
        // Positive onsets leave room for a full observation window.
        for (Illness ill : kIllnesses)
            if (labels.get(ill).positive) CHECK(labels.get(ill).onset_time >= 25.0);
        CHECK(adm.length_of_stay >= 48.0);
        for (const Event& ev : adm.events) {
            CHECK(ev.time >= 0.0);
            CHECK(ev.time <= adm.length_of_stay);
        }
    }
    CHECK(n_sepsis == 20);
    CHECK(n_aki == 10);
    CHECK(n_ali == 15);
}

TEST_CASE("cohort spec round-trips through JSON") {
    CohortSpec s = small_spec(123, 77);
    s.prevalence_sepsis = 0.031;
    s.lab_interval_hours = 40.0;
    s.signature_lead_max = 36.0;
    const auto path = std::filesystem::temp_directory_path() / "cohort_spec.json";
    save_cohort_spec(path.string(), s);
    CohortSpec r = load_cohort_spec(path.string());
    std::filesystem::remove(path);
    CHECK(r.n_admissions == 123);
    CHECK(r.seed == 77);
    CHECK(r.prevalence_sepsis == 0.031);
    CHECK(r.lab_interval_hours == 40.0);
    CHECK(r.signature_lead_max == 36.0);
    CHECK(r.prevalence_aki == s.prevalence_aki); // untouched defaults survive
}

TEST_CASE("invalid prevalence is rejected") {
    CohortSpec s = small_spec(10, 1);
    s.prevalence_aki = 1.0;
    CHECK_THROWS_AS(generate_cohort(s), std::invalid_argument);
    s.prevalence_aki = -0.1;
    CHECK_THROWS_AS(generate_cohort(s), std::invalid_argument);
}
