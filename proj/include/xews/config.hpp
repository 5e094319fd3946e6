#pragma once

#include <string>

#include "xews/baselines.hpp"
#include "xews/labels.hpp"

namespace xews {

// Versioned JSON config files for the editable clinical tables, so thresholds
// can be reviewed and adjusted without a rebuild.
void save_sofa_thresholds(const std::string& path, const SofaThresholds& t);
SofaThresholds load_sofa_thresholds(const std::string& path);

void save_mews_table(const std::string& path, const MewsTable& t);
MewsTable load_mews_table(const std::string& path);

// CSV dump of the parameter registry (code, name, unit, plausible range,
// typical value, vital flag) for auditing units and scaling defaults.
void write_parameter_dictionary(const std::string& path);

} // namespace xews
