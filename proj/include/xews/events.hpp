#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace xews {

// The 34 model input parameters, followed by the four labeling-only events.
// Indices below kNumParameters address grid columns directly.
constexpr int kNumParameters = 34;
constexpr int kNumTimesteps = 24;

// Labeling-only event codes.
constexpr int kAntibiotic = 34;
constexpr int kCultureSample = 35;
constexpr int kNiv = 36;
constexpr int kCpap = 37;
constexpr int kNumEventCodes = 38;

// Grid column indices referenced elsewhere in the pipeline.
constexpr int kParamPo2Arterial = 2;
constexpr int kParamLactateArterial = 7;
constexpr int kParamHemoglobin = 11;
constexpr int kParamPlatelets = 14;
constexpr int kParamLeukocytes = 15;
constexpr int kParamCreatinine = 21;
constexpr int kParamBilirubin = 22;
constexpr int kParamCrp = 25;
constexpr int kParamSystolicBp = 28;
constexpr int kParamDiastolicBp = 29;
constexpr int kParamRespiratoryRate = 30;
constexpr int kParamPulse = 31;
constexpr int kParamSpo2 = 32;
constexpr int kParamTemperature = 33;

struct ParameterInfo {
    std::string name;
    std::string unit;
    // Plausible clinical range; used for scaling defaults and the synthetic
    // generator's baseline distributions.
    double low = 0.0;
    double high = 1.0;
    double typical = 0.5;
    double typical_sd = 0.1;
    bool vital = false;
};

// Full registry: 34 grid parameters plus 4 labeling-only events.
const std::vector<ParameterInfo>& parameter_table();

// Code for an event name, or -1 if the name is not in the vocabulary.
int event_code(const std::string& name);
const std::string& event_name(int code);

struct Event {
    double time = 0.0; // hours since admission start
    int code = 0;      // index into parameter_table()
    double value = 0.0;
};

struct Admission {
    std::string admission_id;
    std::string patient_id;
    double length_of_stay = 0.0; // hours
    double age = 0.0;
    int sex = 0; // 0 female, 1 male
    std::vector<Event> events; // sorted by time
};

struct ParseError {
    std::size_t line = 0;
    std::string message;
};

// JSON-lines reader. First line must be a schema header
// {"schema":"xews-events/1"}; admission lines carry metadata, event lines one
// EventRecord each. Events are validated against the vocabulary and sorted.
std::vector<Admission> parse_events(std::istream& in);
std::vector<Admission> parse_events_file(const std::string& path);

void write_events(std::ostream& out, const std::vector<Admission>& admissions);
void write_events_file(const std::string& path, const std::vector<Admission>& admissions);

// CSV alternative with identical columns.
std::vector<Admission> parse_events_csv(std::istream& in);
void write_events_csv(std::ostream& out, const std::vector<Admission>& admissions);

} // namespace xews
