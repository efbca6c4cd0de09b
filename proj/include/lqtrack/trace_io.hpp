#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "lqtrack/simulator.hpp"

namespace lqtrack {

/// Fixed trace schema, one row per step t = 0..T-1:
///   t, x[0..n), r[0..n), e[0..n), u[0..m), v[0..m), c_t, cum_regret
/// cum_regret is the running sum of (c_t - c_t*) against the offline-optimal
/// trace for the same scenario. v columns are zero for non-OGD controllers.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace,
                     const ScenarioSpec& spec);

/// key=value lines: J, regret, regret_via_inputs, ss_regret, path_length,
/// theory_bound, alpha.
void write_summary(std::ostream& out, const SimulationTrace& trace,
                   const RegretReport& report);

/// Static SVG line plot of one or more named series over a shared x axis.
struct PlotSeries {
    std::string label;
    std::vector<double> values;
    bool dashed = false;
};

void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::vector<PlotSeries>& series);

}  // namespace lqtrack
