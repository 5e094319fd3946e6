#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "xews/grid.hpp"

using namespace xews;

TEST_CASE("parameter registry: 34 grid parameters plus 4 labeling events") {
    const auto& tab = parameter_table();
    REQUIRE(tab.size() == kNumEventCodes);
    // Unique names and a working name->code round trip.
    for (int c = 0; c < kNumEventCodes; ++c) {
        CHECK(event_code(tab[c].name) == c);
        CHECK(event_name(c) == tab[c].name);
    }
    CHECK(event_code("not_a_parameter") == -1);
    // Spot-check column assignments used throughout the pipeline.
    CHECK(tab[kParamPulse].name == "pulse");
    CHECK(tab[kParamCreatinine].name == "p_creatinine");
    CHECK(tab[kAntibiotic].name == "antibiotic_administration");
    CHECK(tab[kCultureSample].name == "culture_sample");
    int vitals = 0;
    for (int c = 0; c < kNumParameters; ++c) vitals += tab[c].vital;
    CHECK(vitals == 6);
}

namespace {

std::string valid_header() { return R"({"schema":"xews-events/1"})" "\n"; }

std::string one_admission() {
    return valid_header() +
           R"({"type":"admission","admission_id":"a1","patient_id":"p1","length_of_stay":100.0,"age":60,"sex":1})" "\n" +
           R"({"type":"event","admission_id":"a1","time":5.0,"parameter":"pulse","value":90})" "\n" +
           R"({"type":"event","admission_id":"a1","time":2.0,"parameter":"p_creatinine","value":80})" "\n";
}

} // namespace

TEST_CASE("parse_events: happy path sorts events by time") {
    std::istringstream in(one_admission());
    std::vector<Admission> adms = parse_events(in);
    REQUIRE(adms.size() == 1);
    const Admission& a = adms[0];
    CHECK(a.admission_id == "a1");
    CHECK(a.length_of_stay == 100.0);
    CHECK(a.sex == 1);
    REQUIRE(a.events.size() == 2);
    CHECK(a.events[0].time == 2.0);
    CHECK(a.events[0].code == kParamCreatinine);
    CHECK(a.events[1].code == kParamPulse);
}

TEST_CASE("parse_events: error cases carry line numbers") {
    auto expect_throw_with = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            parse_events(in);
            FAIL_CHECK("expected a parse failure for: " << needle);
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_throw_with("{\"schema\":\"wrong/9\"}\n", "schema");
    expect_throw_with(valid_header() +
                          R"({"type":"event","admission_id":"a1","time":1.0,"parameter":"pulse","value":1})" "\n",
                      "line 2"); // event before its admission line
    expect_throw_with(one_admission() +
                          R"({"type":"event","admission_id":"a1","time":3.0,"parameter":"bogus","value":1})" "\n",
                      "line 5");
    expect_throw_with(one_admission() +
                          R"({"type":"event","admission_id":"a1","time":-1.0,"parameter":"pulse","value":1})" "\n",
                      "line 5");
    expect_throw_with(one_admission() +
                          R"({"type":"event","admission_id":"a1","time":500.0,"parameter":"pulse","value":1})" "\n",
                      "line 5"); // beyond length of stay
    expect_throw_with(one_admission() + "not json\n", "line 5");
}

TEST_CASE("events: JSONL and CSV round trips preserve everything") {
    std::istringstream in(one_admission());
    std::vector<Admission> adms = parse_events(in);

    std::ostringstream out;
    write_events(out, adms);
    std::istringstream back(out.str());
    std::vector<Admission> again = parse_events(back);
    REQUIRE(again.size() == 1);
    CHECK(again[0].events.size() == 2);
    CHECK(again[0].events[0].value == adms[0].events[0].value);

    std::ostringstream csv;
    write_events_csv(csv, adms);
    std::istringstream csv_in(csv.str());
    std::vector<Admission> from_csv = parse_events_csv(csv_in);
    REQUIRE(from_csv.size() == 1);
    CHECK(from_csv[0].length_of_stay == 100.0);
    REQUIRE(from_csv[0].events.size() == 2);
    CHECK(from_csv[0].events[1].code == kParamPulse);
    CHECK(from_csv[0].events[1].value == 90.0);
}

namespace {

Admission simple_admission() {
    Admission a;
    a.admission_id = "a";
    a.length_of_stay = 72.0;
    return a;
}

} // namespace

TEST_CASE("bucket_hourly: mean per bin, boundary goes to the later bin") {
    Admission a = simple_admission();
    // Window [0, 24): bin b covers [b, b+1).
    a.events.push_back({5.25, kParamPulse, 80.0});
    a.events.push_back({5.75, kParamPulse, 100.0});
    a.events.push_back({6.0, kParamPulse, 60.0}); // boundary -> bin 6
    HourlyGrid g = bucket_hourly(a, 24.0);
    CHECK(g.observed(5, kParamPulse));
    CHECK(g.values.at(5, kParamPulse) == doctest::Approx(90.0));
    CHECK(g.observed(6, kParamPulse));
    CHECK(g.values.at(6, kParamPulse) == doctest::Approx(60.0));
    CHECK_FALSE(g.observed(7, kParamPulse));
    CHECK(g.window_end == 24.0);
}

TEST_CASE("bucket_hourly: bins before admission stay masked") {
    Admission a = simple_admission();
    a.events.push_back({1.0, kParamPulse, 70.0});
    // Window ends at hour 12: bins 0..11 precede admission start.
    HourlyGrid g = bucket_hourly(a, 12.0);
    CHECK(g.observed(13, kParamPulse)); // [1, 2) maps to bin 13
    CHECK(g.values.at(13, kParamPulse) == 70.0);
    for (int t = 0; t < 12; ++t)
        for (int p = 0; p < kNumParameters; ++p) CHECK_FALSE(g.observed(t, p));
}

TEST_CASE("impute: carry-forward then median, idempotent, mask untouched") {
    FeatureScaler scaler = FeatureScaler::from_registry();
    Admission a = simple_admission();
    a.events.push_back({3.5, kParamPulse, 88.0});
    a.events.push_back({10.5, kParamPulse, 52.0});
    HourlyGrid g = bucket_hourly(a, 24.0);
    std::vector<bool> mask_before = g.mask;
    impute(g, scaler);
    CHECK(g.values.at(0, kParamPulse) == scaler.median[kParamPulse]);
    CHECK(g.values.at(2, kParamPulse) == scaler.median[kParamPulse]);
    CHECK(g.values.at(3, kParamPulse) == 88.0);
    CHECK(g.values.at(7, kParamPulse) == 88.0); // carried forward
    CHECK(g.values.at(10, kParamPulse) == 52.0);
    CHECK(g.values.at(23, kParamPulse) == 52.0);
    CHECK(g.mask == mask_before);
    HourlyGrid h = g;
    impute(h, scaler);
    CHECK(h.values.v == g.values.v);
}

TEST_CASE("scaler: round trip and clamping") {
    FeatureScaler s = FeatureScaler::from_registry();
    for (int p = 0; p < kNumParameters; ++p) {
        CHECK(s.min[p] < s.max[p]);
        const double mid = 0.5 * (s.min[p] + s.max[p]);
        CHECK(s.unscale(p, s.scale(p, mid)) == doctest::Approx(mid).epsilon(1e-9));
        CHECK(s.scale(p, s.min[p] - 100.0) == 0.0);
        CHECK(s.scale(p, s.max[p] + 100.0) == 1.0);
    }
}

TEST_CASE("fit_scaler: learns min/max/median from events, keeps defaults elsewhere") {
    Admission a = simple_admission();
    for (double v : {60.0, 80.0, 100.0})
        a.events.push_back({1.0, kParamPulse, v});
    FeatureScaler fitted = fit_scaler({a});
    CHECK(fitted.min[kParamPulse] == 60.0);
    CHECK(fitted.max[kParamPulse] == 100.0);
    CHECK(fitted.median[kParamPulse] == 80.0);
    FeatureScaler defaults = FeatureScaler::from_registry();
    CHECK(fitted.min[kParamCreatinine] == defaults.min[kParamCreatinine]);
    CHECK(fitted.median[kParamSpo2] == defaults.median[kParamSpo2]);
}

TEST_CASE("fit_scaler: constant parameter still scales without dividing by zero") {
    Admission a = simple_admission();
    a.events.push_back({1.0, kParamPulse, 75.0});
    a.events.push_back({2.0, kParamPulse, 75.0});
    FeatureScaler fitted = fit_scaler({a});
    const double s = fitted.scale(kParamPulse, 75.0);
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
}

TEST_CASE("prepare_grid: output fully in [0,1] and deterministic") {
    Admission a = simple_admission();
    a.events.push_back({3.0, kParamPulse, 90.0});
    a.events.push_back({8.0, kParamCreatinine, 120.0});
    FeatureScaler scaler = FeatureScaler::from_registry();
    HourlyGrid g = prepare_grid(a, 24.0, scaler);
    for (double x : g.values.v) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    HourlyGrid h = prepare_grid(a, 24.0, scaler);
    CHECK(g.values.v == h.values.v);
}

TEST_CASE("extract_window: positive window ends at onset minus horizon") {
    Admission a = simple_admission();
    a.length_of_stay = 120.0;
    a.events.push_back({27.5, kParamPulse, 90.0});
    FeatureScaler scaler = FeatureScaler::from_registry();
    Rng rng(1);
    // onset 40h, horizon 12 -> window [4, 28); the event lands in bin 23.
    auto g = extract_window(a, true, 40.0, 12.0, scaler, rng);
    REQUIRE(g.has_value());
    CHECK(g->window_end == 28.0);
    CHECK(g->observed(23, kParamPulse));
    // Too-early windows are rejected.
    Rng rng2(1);
    CHECK_FALSE(extract_window(a, true, 20.0, 24.0, scaler, rng2).has_value());
}

TEST_CASE("extract_window: negative windows land in [24, length_of_stay]") {
    Admission a = simple_admission();
    a.length_of_stay = 200.0;
    FeatureScaler scaler = FeatureScaler::from_registry();
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        auto g = extract_window(a, false, 0.0, 0.0, scaler, rng);
        REQUIRE(g.has_value());
        CHECK(g->window_end >= 24.0);
        CHECK(g->window_end <= 200.0);
    }
}
