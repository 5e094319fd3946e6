#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "xews/events.hpp"
#include "xews/labels.hpp"

namespace xews {

// Generator configuration. Baseline value distributions come from the
// parameter registry; the knobs here control cohort composition, sampling
// cadence, and deterioration signature strength.
struct CohortSpec {
    std::size_t n_admissions = 1000;
    double prevalence_sepsis = 0.0244;
    double prevalence_aki = 0.0075;
    double prevalence_ali = 0.0168;
    double los_median_hours = 153.6;
    double los_log_sd = 0.45;
    double vital_interval_hours = 4.0;
    double core_lab_interval_hours = 12.0;
    double lab_interval_hours = 36.0;
    // Deterioration signatures ramp up over a lead drawn from this range
    // before onset, so earlier horizons carry strictly less signal.
    double signature_lead_min = 12.0;
    double signature_lead_max = 40.0;
    std::size_t max_attempts = 100; // rejection-sampling budget per admission
    std::uint64_t seed = 1;
};

CohortSpec load_cohort_spec(const std::string& path);
void save_cohort_spec(const std::string& path, const CohortSpec& spec);

// Seeded cohort generation. Positives are assigned by exact per-illness
// counts, given a parameter trajectory that forces the corresponding gold
// standard to fire, and re-verified against the real labelers before
// emission; a signature/labeler disagreement after max_attempts throws.
// Per-admission derived seeds make the output independent of evaluation
// order.
std::vector<Admission> generate_cohort(const CohortSpec& spec);

} // namespace xews
