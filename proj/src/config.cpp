#include "lqtrack/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lqtrack {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw BadParamsError(field + ": expected a nested array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw BadParamsError(field + ": ragged rows");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) {
                throw BadParamsError(field + ": non-numeric entry");
            }
            M(i, k) = j[i][k].get<double>();
        }
    }
    return M;
}

Vector parse_vector(const json& j, const std::string& field) {
    if (!j.is_array()) throw BadParamsError(field + ": expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!j[i].is_number()) throw BadParamsError(field + ": non-numeric entry");
        v(i) = j[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(row);
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw BadParamsError(where + ": missing field '" + key + "'");
    return *it;
}

}  // namespace

ConfigFile parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw BadParamsError(std::string("config parse error: ") + e.what());
    }

    const json& jsys = require(j, "system", "config");
    LinearSystem system(parse_matrix(require(jsys, "A", "system"), "system.A"),
                        parse_matrix(require(jsys, "B", "system"), "system.B"));

    const json& jcost = require(j, "cost", "config");
    CostWeights weights(parse_matrix(require(jcost, "Q", "cost"), "cost.Q"),
                        parse_matrix(require(jcost, "R", "cost"), "cost.R"));

    ConfigFile config{ScenarioSpec{std::move(system), std::move(weights)}};
    ScenarioSpec& spec = config.spec;

    const json& jctrl = require(j, "controller", "config");
    spec.controller =
        controller_from_string(require(jctrl, "id", "controller").get<std::string>());
    if (jctrl.contains("alpha")) {
        const json& ja = jctrl["alpha"];
        if (ja.is_string()) {
            if (ja.get<std::string>() != "auto") {
                throw BadParamsError("controller.alpha: expected a number or \"auto\"");
            }
        } else if (ja.is_number()) {
            spec.alpha = ja.get<double>();
        } else {
            throw BadParamsError("controller.alpha: expected a number or \"auto\"");
        }
    }
    if (jctrl.contains("v0")) spec.v0 = parse_vector(jctrl["v0"], "controller.v0");

    const json& jref = require(j, "reference", "config");
    spec.reference_kind =
        reference_kind_from_string(require(jref, "kind", "reference").get<std::string>());
    if (jref.contains("base")) spec.reference_params.base = parse_vector(jref["base"], "reference.base");
    if (jref.contains("step")) spec.reference_params.step = parse_vector(jref["step"], "reference.step");
    if (jref.contains("waypoints")) {
        for (const auto& wp : jref["waypoints"]) {
            spec.reference_params.waypoints.push_back(parse_vector(wp, "reference.waypoints"));
        }
    }
    if (jref.contains("speed")) spec.reference_params.speed = jref["speed"].get<double>();
    if (jref.contains("initial_step"))
        spec.reference_params.initial_step = jref["initial_step"].get<double>();
    if (jref.contains("decay")) spec.reference_params.decay = jref["decay"].get<double>();
    if (jref.contains("seed")) spec.seed = jref["seed"].get<std::uint64_t>();

    spec.horizon = require(j, "horizon", "config").get<long>();
    if (spec.horizon < 1) throw BadParamsError("horizon: must be at least 1");
    if (j.contains("x0")) spec.x0 = parse_vector(j["x0"], "x0");

    if (j.contains("output")) {
        const json& jout = j["output"];
        if (jout.contains("directory")) config.output_directory = jout["directory"].get<std::string>();
        if (jout.contains("formats"))
            config.output_formats = jout["formats"].get<std::vector<std::string>>();
    }
    if (j.contains("batch")) {
        const json& jb = j["batch"];
        if (jb.contains("horizons")) config.batch_horizons = jb["horizons"].get<std::vector<long>>();
        if (jb.contains("trials")) config.batch_trials = jb["trials"].get<int>();
    }
    return config;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw BadParamsError("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const ConfigFile& config) {
    const ScenarioSpec& spec = config.spec;
    json j;
    j["system"] = {{"A", matrix_to_json(spec.system.A)}, {"B", matrix_to_json(spec.system.B)}};
    j["cost"] = {{"Q", matrix_to_json(spec.weights.Q)}, {"R", matrix_to_json(spec.weights.R)}};

    json jctrl;
    jctrl["id"] = to_string(spec.controller);
    if (spec.alpha.has_value()) {
        jctrl["alpha"] = *spec.alpha;
    } else {
        jctrl["alpha"] = "auto";
    }
    if (spec.v0.has_value()) jctrl["v0"] = vector_to_json(*spec.v0);
    j["controller"] = jctrl;

    json jref;
    jref["kind"] = to_string(spec.reference_kind);
    jref["seed"] = spec.seed;
    if (spec.reference_params.base.size() > 0)
        jref["base"] = vector_to_json(spec.reference_params.base);
    if (spec.reference_params.step.size() > 0)
        jref["step"] = vector_to_json(spec.reference_params.step);
    if (!spec.reference_params.waypoints.empty()) {
        json wps = json::array();
        for (const auto& wp : spec.reference_params.waypoints) wps.push_back(vector_to_json(wp));
        jref["waypoints"] = wps;
        jref["speed"] = spec.reference_params.speed;
    }
    if (spec.reference_kind == ReferenceKind::DecayingRandom) {
        jref["initial_step"] = spec.reference_params.initial_step;
        jref["decay"] = spec.reference_params.decay;
    }
    j["reference"] = jref;

    j["horizon"] = spec.horizon;
    if (spec.x0.has_value()) j["x0"] = vector_to_json(*spec.x0);
    j["output"] = {{"directory", config.output_directory}, {"formats", config.output_formats}};
    j["batch"] = {{"horizons", config.batch_horizons}, {"trials", config.batch_trials}};
    return j.dump(2) + "\n";
}

}  // namespace lqtrack
