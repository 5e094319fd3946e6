#include "xews/export.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace xews {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

} // namespace

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_labels_csv(const std::string& path, const std::vector<Admission>& admissions,
                      const std::vector<AdmissionLabels>& labels) {
    if (admissions.size() != labels.size())
        throw std::invalid_argument("write_labels_csv: admission/label count mismatch");
    std::ofstream out = open_out(path);
    out << "admission_id,illness,label,onset_hours,flags\n";
    for (std::size_t i = 0; i < admissions.size(); ++i) {
        for (Illness ill : kIllnesses) {
            const LabelResult& r = labels[i].get(ill);
            out << admissions[i].admission_id << ',' << to_string(ill) << ','
                << (r.positive ? 1 : 0) << ','
                << (r.positive ? format_number(r.onset_time) : std::string()) << ','
                << (r.flagged ? "fallback_baseline" : "") << '\n';
        }
    }
}

std::vector<AdmissionLabels> read_labels_csv(const std::string& path,
                                             const std::vector<Admission>& admissions) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open labels csv: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "admission_id,illness,label,onset_hours,flags")
        throw std::runtime_error("labels csv: unexpected header in " + path);

    struct Row {
        AdmissionLabels labels;
        int seen = 0;
    };
    std::map<std::string, Row> by_id;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<std::string, 5> field;
        std::size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            const std::size_t comma = f < 4 ? line.find(',', start) : line.size();
            if (comma == std::string::npos)
                throw std::runtime_error("labels csv: bad row at line " +
                                         std::to_string(line_no));
            field[f] = line.substr(start, comma - start);
            start = comma + 1;
        }
        const Illness ill = illness_from_string(field[1]);
        LabelResult r;
        r.positive = field[2] == "1";
        if (r.positive) r.onset_time = std::stod(field[3]);
        r.flagged = !field[4].empty();
        Row& row = by_id[field[0]];
        switch (ill) {
        case Illness::Sepsis: row.labels.sepsis = r; break;
        case Illness::Aki: row.labels.aki = r; break;
        case Illness::Ali: row.labels.ali = r; break;
        }
        ++row.seen;
    }
    std::vector<AdmissionLabels> out;
    out.reserve(admissions.size());
    for (const Admission& adm : admissions) {
        auto it = by_id.find(adm.admission_id);
        if (it == by_id.end() || it->second.seen != 3)
            throw std::runtime_error("labels csv: missing rows for admission " +
                                     adm.admission_id);
        out.push_back(it->second.labels);
    }
    return out;
}

void write_risks_csv(const std::string& path, const std::vector<RiskRow>& rows) {
    std::ofstream out = open_out(path);
    out << "admission_id,window_end_hours,risk\n";
    for (const RiskRow& r : rows)
        out << r.admission_id << ',' << format_number(r.window_end) << ','
            << format_number(r.risk) << '\n';
}

void write_explanation_csv(const std::string& path, const RelevanceMap& map,
                           const HourlyGrid& grid, const FeatureScaler& scaler) {
    std::ofstream out = open_out(path);
    out << "timestep,parameter,value,relevance\n";
    const std::size_t t_dim = map.values.shape[0], p_dim = map.values.shape[1];
    for (std::size_t t = 0; t < t_dim; ++t) {
        for (std::size_t p = 0; p < p_dim; ++p) {
            out << t << ',' << event_name(static_cast<int>(p)) << ',';
            if (grid.observed(static_cast<int>(t), static_cast<int>(p)))
                out << format_number(scaler.unscale(
                    static_cast<int>(p), grid.values.v[t * p_dim + p]));
            out << ',' << format_number(map.values.v[t * p_dim + p]) << '\n';
        }
    }
}

void write_global_importance_csv(const std::string& path, const GlobalImportance& gi) {
    std::ofstream out = open_out(path);
    out << "parameter,mean_relevance\n";
    for (int p : gi.order)
        out << event_name(p) << ',' << format_number(gi.mean_relevance[p]) << '\n';
}

void write_local_summary_csv(const std::string& path,
                             const std::vector<LocalSummaryPoint>& points) {
    std::ofstream out = open_out(path);
    out << "parameter,relevance,value,percentile\n";
    for (const LocalSummaryPoint& pt : points)
        out << event_name(pt.parameter) << ',' << format_number(pt.relevance) << ','
            << format_number(pt.value) << ',' << format_number(pt.percentile) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
}

} // namespace xews
