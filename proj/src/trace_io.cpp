#include "lqtrack/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace lqtrack {

void write_trace_csv(std::ostream& out, const SimulationTrace& trace,
                     const ScenarioSpec& spec) {
    const auto n = spec.system.n();
    const auto m = spec.system.m();
    const ReferenceTrajectory ref = scenario_reference(spec);
    const DisturbanceSequence dist = reference_to_disturbance(spec.system, ref);
    const SynthesizedGains gains = synthesize_gains(spec.system, spec.weights);

    // offline-optimal per-step costs for the cumulative regret column
    const OfflineSolution offline = offline_noncausal_inputs(
        spec.system, gains, spec.weights, trace.errors.front(), dist);
    const long T = static_cast<long>(trace.inputs.size());
    std::vector<double> offline_costs(static_cast<std::size_t>(T));
    for (long t = 0; t < T; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        offline_costs[ti] = online_cost(spec.system, gains, spec.weights, offline.errors[ti],
                                        offline.inputs[ti], dist.values[ti], t == T - 1);
    }

    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
    for (Eigen::Index i = 0; i < n; ++i) out << ",r" << i;
    for (Eigen::Index i = 0; i < n; ++i) out << ",e" << i;
    for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
    for (Eigen::Index i = 0; i < m; ++i) out << ",v" << i;
    out << ",c_t,cum_regret\n";

    out << std::setprecision(17);
    double cum_regret = 0.0;
    for (long t = 0; t < T; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        cum_regret += trace.costs[ti] - offline_costs[ti];
        out << t;
        for (Eigen::Index i = 0; i < n; ++i) out << "," << trace.states[ti](i);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << ref.points[ti](i);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << trace.errors[ti](i);
        for (Eigen::Index i = 0; i < m; ++i) out << "," << trace.inputs[ti](i);
        for (Eigen::Index i = 0; i < m; ++i) {
            out << "," << (ti < trace.bias.size() ? trace.bias[ti](i) : 0.0);
        }
        out << "," << trace.costs[ti] << "," << cum_regret << "\n";
    }
}

void write_summary(std::ostream& out, const SimulationTrace& trace,
                   const RegretReport& report) {
    out << std::setprecision(17);
    out << "J=" << trace.total_cost << "\n";
    out << "regret=" << report.regret << "\n";
    out << "regret_via_inputs=" << report.regret_via_inputs << "\n";
    out << "ss_regret=" << report.ss_regret << "\n";
    out << "path_length=" << report.path_length << "\n";
    out << "theory_bound=" << report.theory_bound << "\n";
    out << "alpha=" << trace.alpha_used << "\n";
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

}  // namespace

void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::vector<PlotSeries>& series) {
    double ymin = 0.0, ymax = 1.0;
    std::size_t len = 0;
    bool first = true;
    for (const auto& s : series) {
        len = std::max(len, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            if (first) {
                ymin = ymax = v;
                first = false;
            } else {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    if (len < 2) len = 2;

    const auto sx = [&](std::size_t i) {
        return kMargin + (kWidth - 2 * kMargin) * static_cast<double>(i) /
                             static_cast<double>(len - 1);
    };
    const auto sy = [&](double v) {
        return kHeight - kMargin - (kHeight - 2 * kMargin) * (v - ymin) / (ymax - ymin);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << sy(ymax) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymax
        << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << sy(ymin) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymin
        << "</text>\n";

    int color_idx = 0;
    double legend_y = 40.0;
    for (const auto& s : series) {
        const char* color = colors[color_idx % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!std::isfinite(s.values[i])) continue;
            out << sx(i) << "," << sy(s.values[i]) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << s.label << "</text>\n";
        legend_y += 16.0;
        ++color_idx;
    }
    out << "</svg>\n";
}

}  // namespace lqtrack
