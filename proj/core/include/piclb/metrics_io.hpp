#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "piclb/harness.hpp"

namespace piclb {

/// Column order is fixed:
/// step, imbalance, max_load, mean_load, particles_migrated, cost_migrated,
/// perimeter, locality_max, solver_iters, field_energy
extern const char* const kMetricsCsvHeader;

void write_metrics_csv(std::ostream& os, const std::vector<StepMetrics>& series);
std::string metrics_csv_string(const std::vector<StepMetrics>& series);

/// step, field_energy
void write_energy_csv(std::ostream& os, const std::vector<StepMetrics>& series);

}  // namespace piclb
