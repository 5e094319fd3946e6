#include "xews/events.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace xews {

namespace {

std::vector<ParameterInfo> build_table() {
    // name, unit, low, high, typical, typical_sd, vital
    std::vector<ParameterInfo> t = {
        {"pab_hydrogen_carbonate", "mmol/l", 10, 45, 24.0, 2.0, false},
        {"pvb_hydrogen_carbonate", "mmol/l", 10, 45, 25.0, 2.0, false},
        {"pab_po2", "mmHg", 40, 130, 95.0, 8.0, false},
        {"pab_pco2", "mmHg", 20, 80, 40.0, 4.0, false},
        {"pvb_pco2", "mmHg", 25, 90, 45.0, 4.0, false},
        {"pab_ph", "pH", 6.9, 7.7, 7.40, 0.03, false},
        {"pvb_ph", "pH", 6.9, 7.7, 7.37, 0.03, false},
        {"pab_lactate", "mmol/l", 0.3, 15, 1.2, 0.4, false},
        {"pab_sodium", "mmol/l", 115, 165, 140.0, 2.5, false},
        {"pab_chloride", "mmol/l", 85, 125, 102.0, 2.5, false},
        {"pab_potassium", "mmol/l", 2.0, 7.5, 4.0, 0.3, false},
        {"b_hemoglobin", "mmol/l", 4, 12, 8.5, 0.8, false},
        {"b_neutrophils", "1e9/l", 0, 30, 4.5, 1.2, false},
        {"b_sedimentation_rate", "mm/h", 1, 120, 10.0, 5.0, false},
        {"b_platelets", "1e9/l", 5, 800, 250.0, 50.0, false},
        {"b_leukocytes", "1e9/l", 0.5, 50, 7.5, 1.8, false},
        {"b_hemoglobin_arterial", "mmol/l", 4, 12, 8.4, 0.8, false},
        {"p_sodium", "mmol/l", 115, 165, 139.0, 2.5, false},
        {"p_potassium", "mmol/l", 2.0, 7.5, 4.1, 0.3, false},
        {"p_ldh", "U/l", 80, 2000, 180.0, 30.0, false},
        {"p_albumin", "g/l", 15, 55, 40.0, 3.0, false},
        {"p_creatinine", "umol/l", 20, 800, 70.0, 10.0, false},
        {"p_bilirubin", "umol/l", 2, 400, 10.0, 3.0, false},
        {"p_prolactin", "mIU/l", 50, 2000, 250.0, 80.0, false},
        {"p_glucose", "mmol/l", 2, 30, 6.0, 1.0, false},
        {"p_crp", "mg/l", 0, 400, 5.0, 4.0, false},
        {"b_hba1c", "mmol/mol", 20, 130, 38.0, 5.0, false},
        {"p_egfr", "ml/min", 5, 120, 90.0, 10.0, false},
        {"systolic_bp", "mmHg", 50, 250, 125.0, 12.0, true},
        {"diastolic_bp", "mmHg", 30, 150, 75.0, 8.0, true},
        {"respiratory_rate", "1/min", 4, 60, 15.0, 2.0, true},
        {"pulse", "1/min", 20, 220, 78.0, 9.0, true},
        {"spo2", "%", 50, 100, 97.0, 1.2, true},
        {"temperature", "C", 33, 43, 37.0, 0.35, true},
        {"antibiotic_administration", "event", 0, 1, 1, 0, false},
        {"culture_sample", "event", 0, 1, 1, 0, false},
        {"niv", "event", 0, 1, 1, 0, false},
        {"cpap", "event", 0, 1, 1, 0, false},
    };
    return t;
}

const std::map<std::string, int>& name_index() {
    static const std::map<std::string, int> idx = [] {
        std::map<std::string, int> m;
        const auto& t = parameter_table();
        for (int i = 0; i < static_cast<int>(t.size()); ++i) m[t[i].name] = i;
        return m;
    }();
    return idx;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw std::runtime_error("parse error at line " + std::to_string(line) + ": " + msg);
}

} // namespace

const std::vector<ParameterInfo>& parameter_table() {
    static const std::vector<ParameterInfo> t = build_table();
    return t;
}

int event_code(const std::string& name) {
    const auto& idx = name_index();
    auto it = idx.find(name);
    return it == idx.end() ? -1 : it->second;
}

const std::string& event_name(int code) { return parameter_table().at(code).name; }

namespace {

constexpr const char* kSchema = "xews-events/1";

void finalize(std::map<std::string, Admission>& by_id, std::vector<std::string>& order,
              std::vector<Admission>& out) {
    for (const std::string& id : order) {
        Admission& adm = by_id[id];
        std::stable_sort(adm.events.begin(), adm.events.end(),
                         [](const Event& a, const Event& b) { return a.time < b.time; });
        out.push_back(std::move(adm));
    }
}

} // namespace

std::vector<Admission> parse_events(std::istream& in) {
    using nlohmann::json;
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, Admission> by_id;
    std::vector<std::string> order;

    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            fail(lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!saw_header) {
            if (!j.contains("schema") || j["schema"] != kSchema)
                fail(lineno, "missing or unsupported schema header");
            saw_header = true;
            continue;
        }
        const std::string type = j.value("type", "");
        if (type == "admission") {
            Admission adm;
            adm.admission_id = j.at("admission_id").get<std::string>();
            adm.patient_id = j.at("patient_id").get<std::string>();
            adm.length_of_stay = j.at("length_of_stay").get<double>();
            adm.age = j.value("age", 0.0);
            adm.sex = j.value("sex", 0);
            if (adm.length_of_stay < 0) fail(lineno, "negative length_of_stay");
            if (by_id.count(adm.admission_id)) fail(lineno, "duplicate admission_id");
            order.push_back(adm.admission_id);
            by_id[adm.admission_id] = std::move(adm);
        } else if (type == "event") {
            const std::string id = j.at("admission_id").get<std::string>();
            auto it = by_id.find(id);
            if (it == by_id.end()) fail(lineno, "event before admission record: " + id);
            Event ev;
            ev.time = j.at("time").get<double>();
            if (ev.time < 0) fail(lineno, "negative event time");
            const std::string pname = j.at("parameter").get<std::string>();
            ev.code = event_code(pname);
            if (ev.code < 0) fail(lineno, "unknown parameter: " + pname);
            ev.value = j.value("value", 0.0);
            if (ev.time > it->second.length_of_stay)
                fail(lineno, "event time beyond length_of_stay");
            it->second.events.push_back(ev);
        } else {
            fail(lineno, "unknown record type: " + type);
        }
    }
    if (!saw_header && lineno > 0) fail(1, "missing schema header");
    std::vector<Admission> out;
    finalize(by_id, order, out);
    return out;
}

std::vector<Admission> parse_events_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open events file: " + path);
    return parse_events(in);
}

namespace {

std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

} // namespace

void write_events(std::ostream& out, const std::vector<Admission>& admissions) {
    out << "{\"schema\":\"" << kSchema << "\"}\n";
    for (const Admission& adm : admissions) {
        out << "{\"type\":\"admission\",\"admission_id\":\"" << adm.admission_id
            << "\",\"patient_id\":\"" << adm.patient_id
            << "\",\"length_of_stay\":" << fmt_num(adm.length_of_stay)
            << ",\"age\":" << fmt_num(adm.age) << ",\"sex\":" << adm.sex << "}\n";
        for (const Event& ev : adm.events) {
            out << "{\"type\":\"event\",\"admission_id\":\"" << adm.admission_id
                << "\",\"time\":" << fmt_num(ev.time) << ",\"parameter\":\""
                << event_name(ev.code) << "\",\"value\":" << fmt_num(ev.value) << "}\n";
        }
    }
}

void write_events_file(const std::string& path, const std::vector<Admission>& admissions) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write events file: " + path);
    write_events(out, admissions);
}

void write_events_csv(std::ostream& out, const std::vector<Admission>& admissions) {
    out << "type,admission_id,patient_id,time,parameter,value,length_of_stay,age,sex\n";
    for (const Admission& adm : admissions) {
        out << "admission," << adm.admission_id << ',' << adm.patient_id << ",,,,"
            << fmt_num(adm.length_of_stay) << ',' << fmt_num(adm.age) << ',' << adm.sex
            << "\n";
        for (const Event& ev : adm.events)
            out << "event," << adm.admission_id << ',' << adm.patient_id << ','
                << fmt_num(ev.time) << ',' << event_name(ev.code) << ','
                << fmt_num(ev.value) << ",,,\n";
    }
}

std::vector<Admission> parse_events_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, Admission> by_id;
    std::vector<std::string> order;

    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        parts.push_back(cur);
        return parts;
    };

    if (!std::getline(in, line)) return {};
    ++lineno;
    if (line.rfind("type,admission_id", 0) != 0) fail(1, "missing CSV header");

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9) fail(lineno, "expected 9 columns");
        if (f[0] == "admission") {
            Admission adm;
            adm.admission_id = f[1];
            adm.patient_id = f[2];
            adm.length_of_stay = std::stod(f[6]);
            adm.age = f[7].empty() ? 0.0 : std::stod(f[7]);
            adm.sex = f[8].empty() ? 0 : std::stoi(f[8]);
            if (by_id.count(adm.admission_id)) fail(lineno, "duplicate admission_id");
            order.push_back(adm.admission_id);
            by_id[adm.admission_id] = std::move(adm);
        } else if (f[0] == "event") {
            auto it = by_id.find(f[1]);
            if (it == by_id.end()) fail(lineno, "event before admission record");
            Event ev;
            ev.time = std::stod(f[3]);
            if (ev.time < 0) fail(lineno, "negative event time");
            ev.code = event_code(f[4]);
            if (ev.code < 0) fail(lineno, "unknown parameter: " + f[4]);
            ev.value = f[5].empty() ? 0.0 : std::stod(f[5]);
            it->second.events.push_back(ev);
        } else {
            fail(lineno, "unknown record type: " + f[0]);
        }
    }
    std::vector<Admission> out;
    finalize(by_id, order, out);
    return out;
}

} // namespace xews
