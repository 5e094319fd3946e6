#pragma once

#include <string>
#include <vector>

#include "xews/dtd.hpp"
#include "xews/eval.hpp"

namespace xews {

// Self-contained SVG documents, hand-assembled so plots need no external
// dependency. All coordinates go through one fixed numeric format, keeping
// reruns byte-identical.

// Mean AUROC (over folds) vs. hours before onset, one line per model family.
std::string svg_horizon_lines(const std::vector<SweepRow>& rows, Illness illness);

// Per-patient top-k parameters by mean relevance over the window.
std::string svg_top_parameters(const RelevanceMap& map, std::size_t k = 10);

// Population-level mean relevance bars, top k parameters.
std::string svg_global_importance(const GlobalImportance& gi, std::size_t k = 10);

// One row per top-k parameter, points at their relevance, colored by the
// value's population percentile (5th..95th clamped, blue = low, red = high).
std::string svg_local_summary(const std::vector<LocalSummaryPoint>& points,
                              const GlobalImportance& gi, std::size_t k = 10);

} // namespace xews
