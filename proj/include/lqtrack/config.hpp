#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lqtrack/simulator.hpp"

namespace lqtrack {

/// On-disk run description: a scenario plus output and batch settings.
struct ConfigFile {
    ScenarioSpec spec;
    std::string output_directory = "out";
    std::vector<std::string> output_formats = {"csv"};
    std::vector<long> batch_horizons = {100, 200, 400, 800};
    int batch_trials = 60;
};

/// Parses a JSON config document. Errors carry the offending field path and
/// throw BadParamsError.
ConfigFile parse_config(const std::string& json_text);
ConfigFile load_config(const std::filesystem::path& path);

/// Serializes so that parse_config(render_config(c)) reproduces the same
/// ScenarioSpec.
std::string render_config(const ConfigFile& config);

}  // namespace lqtrack
