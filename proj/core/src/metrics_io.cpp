#include "piclb/metrics_io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace piclb {

const char* const kMetricsCsvHeader =
    "step,imbalance,max_load,mean_load,particles_migrated,cost_migrated,"
    "perimeter,locality_max,solver_iters,field_energy";

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<StepMetrics>& series) {
    os << kMetricsCsvHeader << '\n';
    for (const StepMetrics& m : series) {
        os << m.step << ',' << fmt(m.imbalance) << ',' << m.max_load() << ','
           << fmt(m.mean_load()) << ',' << m.particles_migrated << ',' << fmt(m.cost_migrated)
           << ',' << m.perimeter << ',' << fmt(m.locality_max) << ',' << m.solver_iters << ','
           << fmt(m.field_energy) << '\n';
    }
}

std::string metrics_csv_string(const std::vector<StepMetrics>& series) {
    std::ostringstream os;
    write_metrics_csv(os, series);
    return os.str();
}

void write_energy_csv(std::ostream& os, const std::vector<StepMetrics>& series) {
    os << "step,field_energy\n";
    for (const StepMetrics& m : series) os << m.step << ',' << fmt(m.field_energy) << '\n';
}

}  // namespace piclb
