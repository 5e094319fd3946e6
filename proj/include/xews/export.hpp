#pragma once

#include <string>
#include <vector>

#include "xews/dtd.hpp"
#include "xews/grid.hpp"
#include "xews/labels.hpp"

namespace xews {

// CSV artifact writers. Numbers are printed through one fixed format so a
// rerun with identical seeds produces byte-identical files.
std::string format_number(double v);

// admission_id,illness,label,onset_hours,flags — one row per
// (admission, illness). onset_hours is empty for negatives.
void write_labels_csv(const std::string& path, const std::vector<Admission>& admissions,
                      const std::vector<AdmissionLabels>& labels);

// Inverse of write_labels_csv, aligned with `admissions`; throws when an
// admission has no rows or an illness name is unknown.
std::vector<AdmissionLabels> read_labels_csv(const std::string& path,
                                             const std::vector<Admission>& admissions);

struct RiskRow {
    std::string admission_id;
    double window_end = 0.0;
    double risk = 0.0;
};

// admission_id,window_end_hours,risk
void write_risks_csv(const std::string& path, const std::vector<RiskRow>& rows);

// Per-patient explanation: timestep,parameter,value,relevance with raw
// (unscaled) values; unobserved cells leave value empty.
void write_explanation_csv(const std::string& path, const RelevanceMap& map,
                           const HourlyGrid& grid, const FeatureScaler& scaler);

// parameter,mean_relevance in descending importance order.
void write_global_importance_csv(const std::string& path, const GlobalImportance& gi);

// parameter,relevance,value,percentile — one row per observed cell.
void write_local_summary_csv(const std::string& path,
                             const std::vector<LocalSummaryPoint>& points);

void write_text_file(const std::string& path, const std::string& content);

} // namespace xews
