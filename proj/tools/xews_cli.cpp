// Pipeline entry point: generate / label / train / predict / explain /
// evaluate / report. Every subcommand is deterministic given its flags and
// seed; failures exit nonzero with a single JSON error line on stderr.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xews/config.hpp"
#include "xews/dtd.hpp"
#include "xews/eval.hpp"
#include "xews/export.hpp"
#include "xews/svg.hpp"
#include "xews/synth.hpp"

namespace fs = std::filesystem;
using namespace xews;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1; // reserved; the pipeline runs single-threaded for determinism
    std::string config_path;
};

nlohmann::json load_config_json(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    return nlohmann::json::parse(in);
}

EvalConfig eval_config_from(const nlohmann::json& j, std::uint64_t seed) {
    EvalConfig c;
    c.tcn_filters = j.value("tcn_filters", c.tcn_filters);
    c.tcn_max_epochs = j.value("tcn_max_epochs", c.tcn_max_epochs);
    c.tcn_patience = j.value("tcn_patience", c.tcn_patience);
    c.tcn_batch_size = j.value("tcn_batch_size", c.tcn_batch_size);
    c.tcn_dropout = j.value("tcn_dropout", c.tcn_dropout);
    c.tcn_learning_rate = j.value("tcn_learning_rate", c.tcn_learning_rate);
    c.negative_ratio = j.value("negative_ratio", c.negative_ratio);
    c.gbm_trees = j.value("gbm_trees", c.gbm_trees);
    c.gbm_depth = j.value("gbm_depth", c.gbm_depth);
    c.gbm_shrinkage = j.value("gbm_shrinkage", c.gbm_shrinkage);
    c.seed = seed;
    return c;
}

std::vector<AdmissionLabels> labels_for(const std::vector<Admission>& cohort,
                                        const std::string& labels_path) {
    if (!labels_path.empty()) return read_labels_csv(labels_path, cohort);
    std::vector<AdmissionLabels> labels;
    labels.reserve(cohort.size());
    for (const Admission& adm : cohort) labels.push_back(label_admission(adm));
    return labels;
}

const Admission& find_admission(const std::vector<Admission>& cohort,
                                const std::string& id) {
    for (const Admission& adm : cohort)
        if (adm.admission_id == id) return adm;
    throw std::runtime_error("unknown admission id: " + id);
}

// Prediction-time training samples for one (illness, horizon): positives at
// onset - horizon (dropped when the window ends before hour 1), negatives at
// a seeded uniform time in [24, length_of_stay].
struct CliSample {
    std::size_t adm = 0;
    int label = 0;
    double window_end = 0.0;
};

std::vector<CliSample> build_cli_samples(const std::vector<Admission>& cohort,
                                         const std::vector<AdmissionLabels>& labels,
                                         Illness illness, double horizon,
                                         const std::vector<std::size_t>& indices,
                                         Rng rng) {
    std::vector<CliSample> out;
    for (std::size_t idx : indices) {
        const LabelResult& r = labels[idx].get(illness);
        CliSample s;
        s.adm = idx;
        s.label = r.positive ? 1 : 0;
        if (r.positive) {
            s.window_end = r.onset_time - horizon;
            if (s.window_end < 1.0) continue;
        } else {
            s.window_end = rng.uniform(24.0, std::max(24.0 + 1e-9,
                                                      cohort[idx].length_of_stay));
        }
        out.push_back(s);
    }
    return out;
}

std::vector<CliSample> balance_cli(std::vector<CliSample> samples, double ratio,
                                   Rng rng) {
    std::vector<CliSample> pos, neg;
    for (const CliSample& s : samples) (s.label ? pos : neg).push_back(s);
    if (pos.empty()) return samples;
    const std::size_t want =
        std::min(neg.size(), static_cast<std::size_t>(ratio * pos.size()) + 1);
    for (std::size_t i = neg.size(); i > 1; --i) std::swap(neg[i - 1], neg[rng.below(i)]);
    neg.resize(want);
    pos.insert(pos.end(), neg.begin(), neg.end());
    return pos;
}

// Sidecar next to a model checkpoint holding the training-fold preprocessing
// state (feature scaler or vital medians).
std::string aux_path(const std::string& checkpoint) { return checkpoint + ".aux.json"; }

void save_scaler_aux(const std::string& checkpoint, const FeatureScaler& scaler) {
    nlohmann::json j;
    j["format"] = "xews-aux/1";
    j["scaler"] = {{"min", scaler.min}, {"max", scaler.max}, {"median", scaler.median}};
    std::ofstream out(aux_path(checkpoint));
    if (!out) throw std::runtime_error("cannot write aux file for " + checkpoint);
    out << j.dump(1) << "\n";
}

FeatureScaler load_scaler_aux(const std::string& checkpoint) {
    std::ifstream in(aux_path(checkpoint));
    if (!in)
        throw std::runtime_error("missing preprocessing sidecar: " + aux_path(checkpoint));
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "xews-aux/1" || !j.contains("scaler"))
        throw std::runtime_error("bad preprocessing sidecar: " + aux_path(checkpoint));
    FeatureScaler s;
    s.min = j["scaler"].at("min");
    s.max = j["scaler"].at("max");
    s.median = j["scaler"].at("median");
    return s;
}

void save_medians_aux(const std::string& checkpoint, const std::array<double, 6>& medians) {
    nlohmann::json j;
    j["format"] = "xews-aux/1";
    j["vital_medians"] = medians;
    std::ofstream out(aux_path(checkpoint));
    if (!out) throw std::runtime_error("cannot write aux file for " + checkpoint);
    out << j.dump(1) << "\n";
}

std::array<double, 6> load_medians_aux(const std::string& checkpoint) {
    std::ifstream in(aux_path(checkpoint));
    if (!in)
        throw std::runtime_error("missing preprocessing sidecar: " + aux_path(checkpoint));
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "xews-aux/1" || !j.contains("vital_medians"))
        throw std::runtime_error("bad preprocessing sidecar: " + aux_path(checkpoint));
    return j.at("vital_medians");
}

std::string checkpoint_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("checkpoint is not valid JSON: " + path);
    const std::string format = j.value("format", "");
    if (format == "xews-tcn/1") return "tcn";
    if (format == "xews-gbm/1") return "gbvital";
    throw std::runtime_error("unrecognized checkpoint format in " + path);
}

// ---- subcommands ----------------------------------------------------------

void cmd_generate(const GlobalOpts& g, const std::string& spec_path,
                  const std::string& out, bool seed_given) {
    CohortSpec spec = spec_path.empty() ? CohortSpec{} : load_cohort_spec(spec_path);
    if (seed_given) spec.seed = g.seed;
    write_events_file(out, generate_cohort(spec));
}

void cmd_label(const std::string& events, const std::string& out,
               const std::string& sofa_path) {
    const SofaThresholds thresholds =
        sofa_path.empty() ? SofaThresholds{} : load_sofa_thresholds(sofa_path);
    const auto cohort = parse_events_file(events);
    std::vector<AdmissionLabels> labels;
    labels.reserve(cohort.size());
    for (const Admission& adm : cohort) labels.push_back(label_admission(adm, thresholds));
    write_labels_csv(out, cohort, labels);
}

void cmd_train(const GlobalOpts& g, const std::string& events,
               const std::string& labels_path, Illness illness, double horizon,
               const std::string& model, const std::string& out) {
    const auto cohort = parse_events_file(events);
    const auto labels = labels_for(cohort, labels_path);
    const EvalConfig cfg = eval_config_from(load_config_json(g.config_path), g.seed);

    // Seeded 80/20 patient-level split for early stopping.
    std::vector<std::string> patients;
    std::map<std::string, std::vector<std::size_t>> by_patient;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        auto [it, inserted] = by_patient.try_emplace(cohort[i].patient_id);
        if (inserted) patients.push_back(cohort[i].patient_id);
        it->second.push_back(i);
    }
    Rng shuffle_rng = Rng(g.seed).derive(71);
    for (std::size_t i = patients.size(); i > 1; --i)
        std::swap(patients[i - 1], patients[shuffle_rng.below(i)]);
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < patients.size(); ++i) {
        auto& dst = i * 5 < patients.size() * 4 ? train_idx : val_idx;
        for (std::size_t adm : by_patient[patients[i]]) dst.push_back(adm);
    }

    Rng sample_rng = Rng(g.seed).derive(72);
    auto train_samples =
        balance_cli(build_cli_samples(cohort, labels, illness, horizon, train_idx,
                                      sample_rng.derive(1)),
                    cfg.negative_ratio, sample_rng.derive(2));
    if (train_samples.empty() ||
        std::none_of(train_samples.begin(), train_samples.end(),
                     [](const CliSample& s) { return s.label == 1; }))
        throw std::runtime_error("train: no positive samples for " + to_string(illness) +
                                 " at horizon " + format_number(horizon));

    if (model == "tcn") {
        std::vector<Admission> train_adms;
        for (std::size_t idx : train_idx) train_adms.push_back(cohort[idx]);
        const FeatureScaler scaler = fit_scaler(train_adms);
        auto val_samples =
            balance_cli(build_cli_samples(cohort, labels, illness, horizon, val_idx,
                                          sample_rng.derive(3)),
                        cfg.negative_ratio, sample_rng.derive(4));
        auto to_grids = [&](const std::vector<CliSample>& samples) {
            std::vector<TrainSample> grids;
            for (const CliSample& s : samples) {
                TrainSample ts;
                ts.grid = prepare_grid(cohort[s.adm], s.window_end, scaler);
                ts.label = s.label;
                grids.push_back(std::move(ts));
            }
            return grids;
        };
        TcnConfig tc;
        tc.filters = cfg.tcn_filters;
        tc.max_epochs = cfg.tcn_max_epochs;
        tc.patience = cfg.tcn_patience;
        tc.batch_size = cfg.tcn_batch_size;
        tc.dropout_rate = cfg.tcn_dropout;
        tc.learning_rate = cfg.tcn_learning_rate;
        tc.seed = g.seed;
        Rng init_rng = Rng(tc.seed).derive(0x1417ull);
        TcnNetwork net = build_network(tc, init_rng);
        train(net, to_grids(train_samples), to_grids(val_samples), tc);
        save_checkpoint(out, net);
        save_scaler_aux(out, scaler);
    } else if (model == "gbvital") {
        std::vector<Admission> train_adms;
        for (std::size_t idx : train_idx) train_adms.push_back(cohort[idx]);
        const auto medians = fit_vital_medians(train_adms);
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (const CliSample& s : train_samples) {
            const auto f = build_gbvital_features(cohort[s.adm], s.window_end, medians);
            x.emplace_back(f.begin(), f.end());
            y.push_back(s.label);
        }
        GbmParams params;
        params.n_trees = cfg.gbm_trees;
        params.max_depth = cfg.gbm_depth;
        params.shrinkage = cfg.gbm_shrinkage;
        params.seed = g.seed;
        save_gbm(out, train_gbm(x, y, params));
        save_medians_aux(out, medians);
    } else {
        throw std::runtime_error("unknown model: " + model);
    }
}

void cmd_predict(const std::string& checkpoint, const std::string& events,
                 const std::vector<std::string>& ats, const std::string& out) {
    const auto cohort = parse_events_file(events);
    std::vector<std::pair<const Admission*, double>> targets;
    if (ats.empty()) {
        for (const Admission& adm : cohort) targets.push_back({&adm, adm.length_of_stay});
    } else {
        for (const std::string& at : ats) {
            const std::size_t comma = at.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("--at expects <admission_id,end_time>: " + at);
            const Admission& adm = find_admission(cohort, at.substr(0, comma));
            targets.push_back({&adm, std::stod(at.substr(comma + 1))});
        }
    }
    std::vector<RiskRow> rows;
    if (checkpoint_kind(checkpoint) == "tcn") {
        const TcnNetwork net = load_checkpoint(checkpoint);
        const FeatureScaler scaler = load_scaler_aux(checkpoint);
        for (const auto& [adm, t] : targets)
            rows.push_back({adm->admission_id, t,
                            predict_risk(net, prepare_grid(*adm, t, scaler))});
    } else {
        const GbmModel model = load_gbm(checkpoint);
        const auto medians = load_medians_aux(checkpoint);
        for (const auto& [adm, t] : targets) {
            const auto f = build_gbvital_features(*adm, t, medians);
            rows.push_back({adm->admission_id, t,
                            predict_gbm(model, {f.begin(), f.end()})});
        }
    }
    write_risks_csv(out, rows);
}

void cmd_explain(const std::string& checkpoint, const std::string& events,
                 const std::string& admission_id, double at, const std::string& out_dir) {
    if (checkpoint_kind(checkpoint) != "tcn")
        throw std::runtime_error("explain requires a tcn checkpoint");
    const TcnNetwork net = load_checkpoint(checkpoint);
    const FeatureScaler scaler = load_scaler_aux(checkpoint);
    const auto cohort = parse_events_file(events);
    const Admission& adm = find_admission(cohort, admission_id);
    const double window_end = at > 0.0 ? at : adm.length_of_stay;
    const HourlyGrid grid = prepare_grid(adm, window_end, scaler);
    const RelevanceMap map = explain(net, grid);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_explanation_csv((dir / (admission_id + "_explanation.csv")).string(), map, grid,
                          scaler);
    write_text_file((dir / (admission_id + "_top10.svg")).string(),
                    svg_top_parameters(map, 10));
}

void cmd_evaluate(const GlobalOpts& g, const std::string& events,
                  const std::string& labels_path, Illness illness,
                  const std::string& out) {
    const auto cohort = parse_events_file(events);
    const auto labels = labels_for(cohort, labels_path);
    const EvalConfig cfg = eval_config_from(load_config_json(g.config_path), g.seed);
    write_metrics_csv(out, illness, horizon_sweep(cohort, labels, illness, cfg));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

void cmd_report(const std::string& metrics_path, const std::string& explanations_dir,
                const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    if (!metrics_path.empty()) {
        std::ifstream in(metrics_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open metrics csv: " + metrics_path);
        std::string line;
        std::getline(in, line);
        if (line != "hours_before_onset,fold,model,illness,auroc,auprc")
            throw std::runtime_error("metrics csv: unexpected header");
        std::map<std::string, std::vector<SweepRow>> by_illness;
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (f.size() != 6)
                throw std::runtime_error("metrics csv: bad row at line " +
                                         std::to_string(line_no));
            SweepRow row;
            row.horizon = std::stod(f[0]);
            row.fold = std::stoi(f[1]);
            row.model = model_family_from_string(f[2]);
            row.auroc = std::stod(f[4]);
            row.auprc = std::stod(f[5]);
            by_illness[f[3]].push_back(row);
        }
        for (const auto& [illness_name, rows] : by_illness) {
            const Illness illness = illness_from_string(illness_name);
            write_text_file((dir / ("performance_" + illness_name + ".svg")).string(),
                            svg_horizon_lines(rows, illness));
            // The figure's aggregated series, for auditing the plot.
            std::map<std::pair<std::string, double>, std::pair<double, int>> acc;
            std::map<std::pair<std::string, double>, double> prc;
            for (const SweepRow& r : rows) {
                auto& cell = acc[{to_string(r.model), r.horizon}];
                cell.first += r.auroc;
                cell.second += 1;
                prc[{to_string(r.model), r.horizon}] += r.auprc;
            }
            std::ostringstream csv;
            csv << "model,hours_before_onset,mean_auroc,mean_auprc\n";
            for (const auto& [key, cell] : acc)
                csv << key.first << ',' << format_number(key.second) << ','
                    << format_number(cell.first / cell.second) << ','
                    << format_number(prc[key] / cell.second) << '\n';
            write_text_file((dir / ("performance_" + illness_name + ".csv")).string(),
                            csv.str());
        }
    }

    if (!explanations_dir.empty()) {
        // Rebuild population summaries from the per-patient explanation files.
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(explanations_dir))
            if (entry.path().string().ends_with("_explanation.csv"))
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::runtime_error("no *_explanation.csv files in " + explanations_dir);

        struct Cell {
            int parameter;
            double relevance;
            bool observed;
            double value;
        };
        std::vector<Cell> cells;
        for (const fs::path& file : files) {
            std::ifstream in(file, std::ios::binary);
            std::string line;
            std::getline(in, line);
            if (line != "timestep,parameter,value,relevance")
                throw std::runtime_error("explanation csv: unexpected header in " +
                                         file.string());
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto f = split_csv_line(line);
                if (f.size() != 4)
                    throw std::runtime_error("explanation csv: bad row in " + file.string());
                Cell c;
                c.parameter = event_code(f[1]);
                if (c.parameter < 0)
                    throw std::runtime_error("explanation csv: unknown parameter " + f[1]);
                c.relevance = std::stod(f[3]);
                c.observed = !f[2].empty();
                c.value = c.observed ? std::stod(f[2]) : 0.0;
                cells.push_back(c);
            }
        }

        GlobalImportance gi;
        gi.mean_relevance.assign(kNumParameters, 0.0);
        std::vector<std::size_t> counts(kNumParameters, 0);
        for (const Cell& c : cells) {
            gi.mean_relevance[c.parameter] += c.relevance;
            ++counts[c.parameter];
        }
        for (int p = 0; p < kNumParameters; ++p) {
            if (counts[p] > 0) gi.mean_relevance[p] /= static_cast<double>(counts[p]);
            gi.order.push_back(p);
        }
        std::stable_sort(gi.order.begin(), gi.order.end(), [&](int a, int b) {
            return gi.mean_relevance[a] > gi.mean_relevance[b];
        });

        // Percentiles from the values collected across the explanation files.
        std::array<std::vector<double>, kNumParameters> sorted;
        for (const Cell& c : cells)
            if (c.observed) sorted[c.parameter].push_back(c.value);
        for (auto& v : sorted) std::sort(v.begin(), v.end());
        std::vector<LocalSummaryPoint> points;
        for (const Cell& c : cells) {
            if (!c.observed) continue;
            const auto& v = sorted[c.parameter];
            const auto lo = std::lower_bound(v.begin(), v.end(), c.value) - v.begin();
            const auto hi = std::upper_bound(v.begin(), v.end(), c.value) - v.begin();
            LocalSummaryPoint pt;
            pt.parameter = c.parameter;
            pt.relevance = c.relevance;
            pt.value = c.value;
            pt.percentile = 0.5 * (static_cast<double>(lo) + static_cast<double>(hi)) /
                            static_cast<double>(v.size());
            points.push_back(pt);
        }

        write_global_importance_csv((dir / "global_importance.csv").string(), gi);
        write_text_file((dir / "global_importance.svg").string(),
                        svg_global_importance(gi, 10));
        write_local_summary_csv((dir / "local_summary.csv").string(), points);
        write_text_file((dir / "local_summary.svg").string(),
                        svg_local_summary(points, gi, 10));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acute critical illness early-warning pipeline"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global random seed");
    app.add_option("--threads", g.threads, "worker thread cap (single-threaded pipeline)");
    app.add_option("--config", g.config_path, "JSON file with training/evaluation knobs");

    std::string spec_path, events, labels_path, out, out_dir, checkpoint, admission_id;
    std::string model = "tcn", illness_name = "sepsis", sofa_path;
    std::vector<std::string> ats;
    double horizon = 0.0, at_time = 0.0;

    auto* generate = app.add_subcommand("generate", "emit a synthetic cohort event file");
    generate->add_option("--spec", spec_path, "cohort spec JSON (defaults when omitted)");
    generate->add_option("--out", out, "events JSONL path")->required();

    auto* label = app.add_subcommand("label", "apply the gold-standard labelers");
    label->add_option("--events", events)->required();
    label->add_option("--out", out, "labels CSV path")->required();
    label->add_option("--sofa-thresholds", sofa_path, "SOFA thresholds config JSON");

    auto* train_cmd = app.add_subcommand("train", "train a risk model");
    train_cmd->add_option("--events", events)->required();
    train_cmd->add_option("--labels", labels_path, "labels CSV (recomputed when omitted)");
    train_cmd->add_option("--illness", illness_name)->check(CLI::IsMember({"sepsis", "aki", "ali"}));
    train_cmd->add_option("--horizon", horizon, "hours before onset")
        ->check(CLI::IsMember(std::vector<double>(kHorizons.begin(), kHorizons.end())));
    train_cmd->add_option("--model", model)->check(CLI::IsMember({"tcn", "gbvital"}));
    train_cmd->add_option("--out", out, "checkpoint path")->required();

    auto* predict = app.add_subcommand("predict", "score admissions with a checkpoint");
    predict->add_option("--checkpoint", checkpoint)->required();
    predict->add_option("--events", events)->required();
    predict->add_option("--at", ats, "admission_id,end_time (repeatable; all at discharge when omitted)");
    predict->add_option("--out", out, "risks CSV path")->required();

    auto* explain_cmd = app.add_subcommand("explain", "per-patient relevance decomposition");
    explain_cmd->add_option("--checkpoint", checkpoint)->required();
    explain_cmd->add_option("--events", events)->required();
    explain_cmd->add_option("--admission", admission_id)->required();
    explain_cmd->add_option("--at", at_time, "window end in hours (discharge when omitted)");
    explain_cmd->add_option("--out-dir", out_dir)->required();

    auto* evaluate = app.add_subcommand("evaluate", "five-fold horizon sweep over all models");
    evaluate->add_option("--events", events)->required();
    evaluate->add_option("--labels", labels_path, "labels CSV (recomputed when omitted)");
    evaluate->add_option("--illness", illness_name)->check(CLI::IsMember({"sepsis", "aki", "ali"}));
    evaluate->add_option("--out", out, "metrics CSV path")->required();

    auto* report = app.add_subcommand("report", "render figures from pipeline outputs");
    report->add_option("--metrics", labels_path, "metrics CSV from evaluate");
    report->add_option("--explanations", events, "directory of per-patient explanation CSVs");
    report->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            cmd_generate(g, spec_path, out, app.count("--seed") > 0);
        else if (label->parsed())
            cmd_label(events, out, sofa_path);
        else if (train_cmd->parsed())
            cmd_train(g, events, labels_path, illness_from_string(illness_name), horizon,
                      model, out);
        else if (predict->parsed())
            cmd_predict(checkpoint, events, ats, out);
        else if (explain_cmd->parsed())
            cmd_explain(checkpoint, events, admission_id, at_time, out_dir);
        else if (evaluate->parsed())
            cmd_evaluate(g, events, labels_path, illness_from_string(illness_name), out);
        else if (report->parsed())
            cmd_report(labels_path, events, out_dir);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
