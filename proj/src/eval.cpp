#include "xews/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "xews/baselines.hpp"
#include "xews/gbm.hpp"
#include "xews/grid.hpp"

namespace xews {

namespace {

void check_two_classes(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("metric: score/label size mismatch");
}

} // namespace

double auroc_pair_counting(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_two_classes(scores, labels);
    double concordant = 0.0, ties = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++n_pos;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j]) concordant += 1.0;
            else if (scores[i] == scores[j]) ties += 1.0;
        }
    }
    n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auroc: both classes required");
    return (concordant + 0.5 * ties) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auroc_rank_based(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_two_classes(scores, labels);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks over tie groups.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] == 1) {
            rank_sum_pos += rank[k];
            ++n_pos;
        }
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auroc: both classes required");
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double compute_auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    return scores.size() <= 10000 ? auroc_pair_counting(scores, labels)
                                  : auroc_rank_based(scores, labels);
}

double compute_auprc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_two_classes(scores, labels);
    const std::size_t n_pos =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (n_pos == 0) throw std::invalid_argument("auprc: no positives");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Average precision: sum (R_k - R_{k-1}) * P_k over descending thresholds,
    // with all tied scores entering at one threshold.
    double ap = 0.0;
    double tp = 0.0, fp = 0.0, prev_recall = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k)
            (labels[order[k]] == 1 ? tp : fp) += 1.0;
        const double recall = tp / static_cast<double>(n_pos);
        const double precision = tp / (tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j + 1;
    }
    return ap;
}

std::string to_string(ModelFamily m) {
    switch (m) {
    case ModelFamily::Tcn: return "tcn";
    case ModelFamily::GbVital: return "gbvital";
    case ModelFamily::Mews: return "mews";
    case ModelFamily::Sofa: return "sofa";
    }
    throw std::logic_error("unknown model family");
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "tcn") return ModelFamily::Tcn;
    if (s == "gbvital") return ModelFamily::GbVital;
    if (s == "mews") return ModelFamily::Mews;
    if (s == "sofa") return ModelFamily::Sofa;
    throw std::invalid_argument("unknown model family: " + s);
}

namespace {

struct EvalSample {
    std::size_t adm = 0;
    int label = 0;
    double window_end = 0.0;
};

// Prediction-time samples for one (illness, horizon): each positive at
// onset - horizon, each negative at a seeded uniform time in [24, los].
// Positives whose window would end before hour 1 are excluded.
std::vector<EvalSample> build_samples(const std::vector<Admission>& cohort,
                                      const std::vector<AdmissionLabels>& labels,
                                      Illness illness, double horizon,
                                      const std::vector<std::size_t>& indices,
                                      Rng rng) {
    std::vector<EvalSample> out;
    for (std::size_t idx : indices) {
        const LabelResult& r = labels[idx].get(illness);
        EvalSample s;
        s.adm = idx;
        s.label = r.positive ? 1 : 0;
        if (r.positive) {
            s.window_end = r.onset_time - horizon;
            if (s.window_end < 1.0) continue;
        } else {
            const double hi = std::max(24.0 + 1e-9, cohort[idx].length_of_stay);
            s.window_end = rng.uniform(24.0, hi);
        }
        out.push_back(s);
    }
    return out;
}

// Seeded subsample keeping every positive and `ratio` negatives per positive.
std::vector<EvalSample> balance(const std::vector<EvalSample>& samples, double ratio,
                                Rng rng) {
    std::vector<EvalSample> pos, neg;
    for (const EvalSample& s : samples) (s.label ? pos : neg).push_back(s);
    if (pos.empty()) return samples;
    const std::size_t want =
        std::min(neg.size(), static_cast<std::size_t>(ratio * pos.size()) + 1);
    for (std::size_t i = neg.size(); i > 1; --i) std::swap(neg[i - 1], neg[rng.below(i)]);
    neg.resize(want);
    std::vector<EvalSample> out = pos;
    out.insert(out.end(), neg.begin(), neg.end());
    return out;
}

std::vector<TrainSample> to_grids(const std::vector<Admission>& cohort,
                                  const std::vector<EvalSample>& samples,
                                  const FeatureScaler& scaler) {
    std::vector<TrainSample> out;
    out.reserve(samples.size());
    for (const EvalSample& s : samples) {
        TrainSample ts;
        ts.grid = prepare_grid(cohort[s.adm], s.window_end, scaler);
        ts.label = s.label;
        out.push_back(std::move(ts));
    }
    return out;
}

} // namespace

std::vector<FoldSplit> make_folds(const std::vector<Admission>& cohort,
                                  std::uint64_t seed) {
    std::vector<std::string> patients;
    std::map<std::string, std::vector<std::size_t>> by_patient;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        auto [it, inserted] = by_patient.try_emplace(cohort[i].patient_id);
        if (inserted) patients.push_back(cohort[i].patient_id);
        it->second.push_back(i);
    }
    if (patients.size() < 10)
        throw std::invalid_argument("cross_validate: need at least 10 patients");
    Rng rng = Rng(seed).derive(0xF01Dull);
    for (std::size_t i = patients.size(); i > 1; --i)
        std::swap(patients[i - 1], patients[rng.below(i)]);

    std::vector<std::vector<std::size_t>> deciles(10);
    for (std::size_t i = 0; i < patients.size(); ++i)
        for (std::size_t adm : by_patient[patients[i]])
            deciles[i * 10 / patients.size()].push_back(adm);

    std::vector<FoldSplit> folds(5);
    for (int f = 0; f < 5; ++f) {
        folds[f].test = deciles[2 * f];
        folds[f].val = deciles[2 * f + 1];
        for (int d = 0; d < 10; ++d) {
            if (d == 2 * f || d == 2 * f + 1) continue;
            folds[f].train.insert(folds[f].train.end(), deciles[d].begin(),
                                  deciles[d].end());
        }
    }
    return folds;
}

namespace {

std::vector<double> score_fold(const std::vector<Admission>& cohort,
                               const std::vector<AdmissionLabels>& labels,
                               ModelFamily family, Illness illness, double horizon,
                               const EvalConfig& config, const FoldSplit& fold, int f,
                               const std::vector<EvalSample>& test_samples) {
    Rng fold_rng = Rng(config.seed).derive(9000 + static_cast<std::uint64_t>(f));

    std::vector<double> scores;
    scores.reserve(test_samples.size());

    switch (family) {
    case ModelFamily::Mews: {
        for (const EvalSample& s : test_samples)
            scores.push_back(static_cast<double>(
                compute_mews(cohort[s.adm], s.window_end)));
        break;
    }
    case ModelFamily::Sofa: {
        for (const EvalSample& s : test_samples)
            scores.push_back(static_cast<double>(sofa_risk(cohort[s.adm], s.window_end)));
        break;
    }
    case ModelFamily::GbVital: {
        std::vector<Admission> train_adms;
        for (std::size_t idx : fold.train) train_adms.push_back(cohort[idx]);
        const auto medians = fit_vital_medians(train_adms);

        auto train_samples = balance(
            build_samples(cohort, labels, illness, horizon, fold.train,
                          fold_rng.derive(1)),
            config.negative_ratio, fold_rng.derive(2));
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (const EvalSample& s : train_samples) {
            const auto feats = build_gbvital_features(cohort[s.adm], s.window_end, medians);
            x.emplace_back(feats.begin(), feats.end());
            y.push_back(s.label);
        }
        GbmParams params;
        params.n_trees = config.gbm_trees;
        params.max_depth = config.gbm_depth;
        params.shrinkage = config.gbm_shrinkage;
        params.seed = config.seed;
        const GbmModel model = train_gbm(x, y, params);
        for (const EvalSample& s : test_samples) {
            const auto feats = build_gbvital_features(cohort[s.adm], s.window_end, medians);
            scores.push_back(predict_gbm(model, {feats.begin(), feats.end()}));
        }
        break;
    }
    case ModelFamily::Tcn: {
        std::vector<Admission> train_adms;
        for (std::size_t idx : fold.train) train_adms.push_back(cohort[idx]);
        const FeatureScaler scaler = fit_scaler(train_adms);

        auto train_samples = balance(
            build_samples(cohort, labels, illness, horizon, fold.train,
                          fold_rng.derive(1)),
            config.negative_ratio, fold_rng.derive(2));
        auto val_samples = balance(
            build_samples(cohort, labels, illness, horizon, fold.val,
                          fold_rng.derive(3)),
            config.negative_ratio, fold_rng.derive(4));

        TcnConfig tc;
        tc.filters = config.tcn_filters;
        tc.max_epochs = config.tcn_max_epochs;
        tc.patience = config.tcn_patience;
        tc.batch_size = config.tcn_batch_size;
        tc.dropout_rate = config.tcn_dropout;
        tc.learning_rate = config.tcn_learning_rate;
        tc.seed = config.seed + static_cast<std::uint64_t>(f);
        Rng init_rng = Rng(tc.seed).derive(0x1417ull);
        TcnNetwork net = build_network(tc, init_rng);
        train(net, to_grids(cohort, train_samples, scaler),
              to_grids(cohort, val_samples, scaler), tc);
        for (const EvalSample& s : test_samples)
            scores.push_back(predict_risk(net, prepare_grid(cohort[s.adm], s.window_end,
                                                            scaler)));
        break;
    }
    }
    return scores;
}

} // namespace

CvResult cross_validate(const std::vector<Admission>& cohort,
                        const std::vector<AdmissionLabels>& labels, ModelFamily family,
                        Illness illness, double horizon, const EvalConfig& config) {
    const auto folds = make_folds(cohort, config.seed);
    CvResult result;
    for (int f = 0; f < 5; ++f) {
        Rng sample_rng = Rng(config.seed).derive(100 + static_cast<std::uint64_t>(f));
        const auto test_samples =
            build_samples(cohort, labels, illness, horizon, folds[f].test, sample_rng);
        std::vector<int> y;
        for (const EvalSample& s : test_samples) y.push_back(s.label);
        if (std::count(y.begin(), y.end(), 1) == 0 ||
            std::count(y.begin(), y.end(), 0) == 0)
            throw std::runtime_error(
                "cross_validate: fold " + std::to_string(f) +
                " lacks a class; cohort too small for stratification");
        const auto scores = score_fold(cohort, labels, family, illness, horizon, config,
                                       folds[f], f, test_samples);
        FoldMetrics m;
        m.fold = f;
        m.auroc = compute_auroc(scores, y);
        m.auprc = compute_auprc(scores, y);
        result.folds.push_back(m);
    }
    auto mean_ci = [](const std::vector<FoldMetrics>& folds, auto getter, double& mean,
                      double& ci) {
        double sum = 0.0;
        for (const FoldMetrics& m : folds) sum += getter(m);
        mean = sum / folds.size();
        double var = 0.0;
        for (const FoldMetrics& m : folds) {
            const double d = getter(m) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / (folds.size() - 1));
        ci = 1.96 * sd / std::sqrt(static_cast<double>(folds.size()));
    };
    mean_ci(result.folds, [](const FoldMetrics& m) { return m.auroc; }, result.mean_auroc,
            result.ci_auroc);
    mean_ci(result.folds, [](const FoldMetrics& m) { return m.auprc; }, result.mean_auprc,
            result.ci_auprc);
    return result;
}

std::vector<SweepRow> horizon_sweep(const std::vector<Admission>& cohort,
                                    const std::vector<AdmissionLabels>& labels,
                                    Illness illness, const EvalConfig& config) {
    std::vector<SweepRow> rows;
    for (double h : kHorizons) {
        for (ModelFamily family : {ModelFamily::Tcn, ModelFamily::Mews, ModelFamily::Sofa,
                                   ModelFamily::GbVital}) {
            const CvResult cv = cross_validate(cohort, labels, family, illness, h, config);
            for (const FoldMetrics& m : cv.folds) {
                SweepRow row;
                row.horizon = h;
                row.model = family;
                row.fold = m.fold;
                row.auroc = m.auroc;
                row.auprc = m.auprc;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_metrics_csv(const std::string& path, Illness illness,
                       const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics csv: " + path);
    out << "hours_before_onset,fold,model,illness,auroc,auprc\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%d,%s,%s,%.10g,%.10g", r.horizon, r.fold,
                      to_string(r.model).c_str(), to_string(illness).c_str(), r.auroc,
                      r.auprc);
        out << buf << "\n";
    }
}

} // namespace xews
