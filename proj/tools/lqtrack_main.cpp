#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lqtrack/config.hpp"
#include "lqtrack/scenarios.hpp"
#include "lqtrack/trace_io.hpp"

namespace fs = std::filesystem;
using namespace lqtrack;

namespace {

// exit codes: 0 ok, 2 assumption violation, 3 unstable configuration,
// 4 I/O or parse error
constexpr int kExitAssumption = 2;
constexpr int kExitUnstable = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
    std::string config_path;
    std::string scenario = "quadrotor";
    std::string controller;
    std::string alpha = "auto";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool svg = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file (overrides --scenario)");
    cmd->add_option("--scenario", opt.scenario, "built-in scenario name");
    cmd->add_option("--controller", opt.controller,
                    "controller id: ss-ogd, naive-ogd, ce, offline, ss-benchmark");
    cmd->add_option("--alpha", opt.alpha, "step size (float) or 'auto'");
    cmd->add_option("--seed", opt.seed, "reference generator seed")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_flag("--svg", opt.svg, "also emit SVG plots");
}

ConfigFile resolve_config(const CommonOptions& opt) {
    ConfigFile config;
    if (!opt.config_path.empty()) {
        config = load_config(opt.config_path);
    } else {
        config.spec = build_scenario(opt.scenario);
    }
    if (!opt.controller.empty()) {
        config.spec.controller = controller_from_string(opt.controller);
    }
    if (opt.alpha == "auto") {
        if (!opt.config_path.empty()) {
            // keep the config file's choice unless the flag was changed
        } else {
            config.spec.alpha.reset();
        }
    } else {
        config.spec.alpha = std::stod(opt.alpha);
    }
    if (opt.seed_set) config.spec.seed = opt.seed;
    if (!opt.out_dir.empty()) config.output_directory = opt.out_dir;
    if (opt.svg) config.output_formats.push_back("svg");
    return config;
}

void write_manifest(const fs::path& dir, const ConfigFile& config,
                    const std::vector<std::string>& artifacts) {
    nlohmann::json j;
    j["artifacts"] = artifacts;
    j["config"] = nlohmann::json::parse(render_config(config));
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << "\n";
}

bool wants_svg(const ConfigFile& config) {
    for (const auto& f : config.output_formats) {
        if (f == "svg") return true;
    }
    return false;
}

int cmd_scenarios() {
    for (const auto& entry : scenario_registry()) {
        std::cout << entry.name << "  (n=" << entry.n << ", m=" << entry.m << ")  "
                  << entry.description << "\n";
    }
    return 0;
}

int cmd_synthesize(const CommonOptions& opt) {
    const ConfigFile config = resolve_config(opt);
    const ScenarioSpec& spec = config.spec;
    const SynthesizedGains gains = synthesize_gains(spec.system, spec.weights);
    const double alpha =
        spec.alpha.value_or(select_step_size(spec.system, gains, spec.weights));
    const CombinedDynamics cd = build_combined(gains, spec.weights, spec.system, alpha);
    if (!check_step_size(cd)) {
        throw UnstableStepError("selected step size does not stabilize the combined dynamics");
    }
    const bool sufficient = sufficient_condition(cd, spec.system, gains);

    std::cout << std::setprecision(10);
    std::cout << "P =\n" << gains.P << "\n";
    std::cout << "K =\n" << gains.K << "\n";
    std::cout << "S =\n" << gains.S << "\n";
    std::cout << "rho(F) = " << spectral_radius(gains.F) << "\n";
    std::cout << "alpha = " << alpha << "\n";
    std::cout << "rho(Atilde) = " << spectral_radius(cd.Atilde) << "\n";
    std::cout << "sufficient_condition = " << (sufficient ? "true" : "false") << "\n";
    return 0;
}

int cmd_simulate(const CommonOptions& opt) {
    const ConfigFile config = resolve_config(opt);
    const SimulationTrace trace = rollout(config.spec);
    const RegretReport report = dynamic_regret(trace, config.spec);

    const fs::path dir(config.output_directory);
    fs::create_directories(dir);
    std::vector<std::string> artifacts;

    {
        std::ofstream csv(dir / "trace.csv");
        write_trace_csv(csv, trace, config.spec);
        artifacts.push_back("trace.csv");
    }
    {
        std::ofstream sum(dir / "summary.txt");
        write_summary(sum, trace, report);
        artifacts.push_back("summary.txt");
    }
    if (wants_svg(config)) {
        const ReferenceTrajectory ref = scenario_reference(config.spec);
        std::vector<PlotSeries> tracking;
        const auto n = config.spec.system.n();
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n, 2); ++i) {
            PlotSeries sx{"x" + std::to_string(i), {}, false};
            PlotSeries sr{"r" + std::to_string(i), {}, true};
            for (std::size_t t = 0; t < trace.states.size(); ++t) {
                sx.values.push_back(trace.states[t](i));
                sr.values.push_back(ref.points[t](i));
            }
            tracking.push_back(std::move(sx));
            tracking.push_back(std::move(sr));
        }
        std::ofstream plot(dir / "tracking.svg");
        write_svg_plot(plot, "position vs reference", tracking);
        artifacts.push_back("tracking.svg");

        // cumulative regret from the per-step cost difference in the CSV sense
        std::ostringstream csv_text;
        write_trace_csv(csv_text, trace, config.spec);
        PlotSeries cum{"cumulative regret", {}, false};
        std::istringstream lines(csv_text.str());
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) {
            cum.values.push_back(std::stod(line.substr(line.rfind(',') + 1)));
        }
        std::ofstream rplot(dir / "regret.svg");
        write_svg_plot(rplot, "cumulative regret", {cum});
        artifacts.push_back("regret.svg");
    }
    write_manifest(dir, config, artifacts);

    std::cout << std::setprecision(10) << "J = " << trace.total_cost
              << ", regret = " << report.regret << ", L(T) = " << report.path_length
              << ", bound = " << report.theory_bound << "\n";
    std::cout << "wrote " << (dir / "trace.csv").string() << "\n";
    return 0;
}

int cmd_batch_regret(const CommonOptions& opt) {
    const ConfigFile config = resolve_config(opt);
    const std::vector<BatchRow> table = batch_worst_case_regret(
        config.spec, config.batch_horizons, config.batch_trials, config.spec.seed);

    const fs::path dir(config.output_directory);
    fs::create_directories(dir);
    std::vector<std::string> artifacts;
    {
        std::ofstream csv(dir / "batch.csv");
        csv << "T,worst_regret,mean_regret,theory_bound\n" << std::setprecision(17);
        for (const auto& row : table) {
            csv << row.horizon << "," << row.worst_regret << "," << row.mean_regret << ","
                << row.theory_bound << "\n";
        }
        artifacts.push_back("batch.csv");
    }
    if (wants_svg(config)) {
        PlotSeries worst{"worst regret", {}, false};
        PlotSeries mean{"mean regret", {}, true};
        for (const auto& row : table) {
            worst.values.push_back(row.worst_regret);
            mean.values.push_back(row.mean_regret);
        }
        std::ofstream plot(dir / "batch.svg");
        write_svg_plot(plot, "worst-case regret vs horizon", {worst, mean});
        artifacts.push_back("batch.svg");
    }
    write_manifest(dir, config, artifacts);

    for (const auto& row : table) {
        std::cout << "T=" << row.horizon << " worst=" << row.worst_regret
                  << " mean=" << row.mean_regret << " bound=" << row.theory_bound << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online linear-quadratic tracking toolkit"};
    app.require_subcommand(1);

    CommonOptions opt;
    CLI::App* synth = app.add_subcommand("synthesize", "LQR/step-size synthesis report");
    add_common_flags(synth, opt);
    CLI::App* sim = app.add_subcommand("simulate", "closed-loop rollout with regret report");
    add_common_flags(sim, opt);
    CLI::App* batch =
        app.add_subcommand("batch-regret", "worst-case regret over seeded trials");
    add_common_flags(batch, opt);
    app.add_subcommand("scenarios", "list built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitIo;
    }

    try {
        if (app.got_subcommand("scenarios")) return cmd_scenarios();
        if (app.got_subcommand("synthesize")) return cmd_synthesize(opt);
        if (app.got_subcommand("simulate")) return cmd_simulate(opt);
        if (app.got_subcommand("batch-regret")) return cmd_batch_regret(opt);
    } catch (const UnstableStepError& e) {
        std::cerr << "error: unstable configuration: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const NoStableStepError& e) {
        std::cerr << "error: unstable configuration: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const BadParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: assumption violated: " << e.what() << "\n";
        return kExitAssumption;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
