#include "xews/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "xews/export.hpp"

namespace xews {

namespace {

constexpr const char* kSofaFormat = "xews-sofa-thresholds/1";
constexpr const char* kMewsFormat = "xews-mews-table/1";

nlohmann::json parse_config(const std::string& path, const char* format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != format)
        throw std::runtime_error("config format mismatch in " + path);
    return j;
}

void dump_config(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config: " + path);
    out << j.dump(1) << "\n";
}

nlohmann::json bands_to_json(const std::vector<MewsBand>& bands) {
    nlohmann::json arr = nlohmann::json::array();
    for (const MewsBand& b : bands) {
        nlohmann::json bj;
        if (std::isfinite(b.upper)) bj["upper"] = b.upper;
        bj["score"] = b.score;
        arr.push_back(std::move(bj));
    }
    return arr;
}

std::vector<MewsBand> bands_from_json(const nlohmann::json& arr) {
    std::vector<MewsBand> bands;
    for (const auto& bj : arr) {
        MewsBand b;
        b.upper = bj.value("upper", std::numeric_limits<double>::infinity());
        b.score = bj.at("score");
        bands.push_back(b);
    }
    if (bands.empty()) throw std::runtime_error("mews table: empty band list");
    return bands;
}

} // namespace

void save_sofa_thresholds(const std::string& path, const SofaThresholds& t) {
    dump_config(path, {
        {"format", kSofaFormat},
        {"pf_ratio", t.pf_ratio},
        {"platelets", t.platelets},
        {"bilirubin", t.bilirubin},
        {"map_low", t.map_low},
        {"creatinine", t.creatinine},
    });
}

SofaThresholds load_sofa_thresholds(const std::string& path) {
    const nlohmann::json j = parse_config(path, kSofaFormat);
    SofaThresholds t;
    t.pf_ratio = j.at("pf_ratio");
    t.platelets = j.at("platelets");
    t.bilirubin = j.at("bilirubin");
    t.map_low = j.at("map_low");
    t.creatinine = j.at("creatinine");
    return t;
}

void save_mews_table(const std::string& path, const MewsTable& t) {
    dump_config(path, {
        {"format", kMewsFormat},
        {"systolic_bp", bands_to_json(t.systolic_bp)},
        {"pulse", bands_to_json(t.pulse)},
        {"respiratory_rate", bands_to_json(t.respiratory_rate)},
        {"temperature", bands_to_json(t.temperature)},
        {"spo2", bands_to_json(t.spo2)},
    });
}

MewsTable load_mews_table(const std::string& path) {
    const nlohmann::json j = parse_config(path, kMewsFormat);
    MewsTable t;
    t.systolic_bp = bands_from_json(j.at("systolic_bp"));
    t.pulse = bands_from_json(j.at("pulse"));
    t.respiratory_rate = bands_from_json(j.at("respiratory_rate"));
    t.temperature = bands_from_json(j.at("temperature"));
    t.spo2 = bands_from_json(j.at("spo2"));
    return t;
}

void write_parameter_dictionary(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write parameter dictionary: " + path);
    out << "code,name,unit,low,high,typical,typical_sd,vital\n";
    const auto& table = parameter_table();
    for (std::size_t code = 0; code < table.size(); ++code) {
        const ParameterInfo& p = table[code];
        out << code << ',' << p.name << ',' << p.unit << ',' << format_number(p.low)
            << ',' << format_number(p.high) << ',' << format_number(p.typical) << ','
            << format_number(p.typical_sd) << ',' << (p.vital ? 1 : 0) << '\n';
    }
}

} // namespace xews
