#include "rmdp/config.hpp"

#include <numbers>

#include "rmdp/model_io.hpp"

namespace rmdp {

namespace {

using nlohmann::json;

std::pair<double, double> pair_at(const json& j, const char* key, std::pair<double, double> fallback) {
    if (!j.contains(key)) return fallback;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError(std::string("'") + key + "' must be a [lo, hi] pair");
    return {v[0], v[1]};
}

Eigen::VectorXd vec(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> std_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

template <class F>
auto guarded(const char* section, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(section) + ": " + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string(section) + ": " + e.what());
    }
}

}  // namespace

SystemConfig system_config_from_json(const json& j) {
    return guarded("system", [&] {
        SystemConfig c;
        auto& p = c.params;
        p.delta = j.value("delta", p.delta);
        std::tie(p.alpha_lo, p.alpha_hi) = pair_at(j, "alpha", {p.alpha_lo, p.alpha_hi});
        std::tie(p.beta_lo, p.beta_hi) = pair_at(j, "beta", {p.beta_lo, p.beta_hi});
        p.noise = j.value("noise", p.noise);
        const std::string reading = j.value("noise_reading", std::string("variance"));
        if (reading == "variance")
            p.noise_reading = NoiseReading::variance;
        else if (reading == "std_dev")
            p.noise_reading = NoiseReading::std_dev;
        else
            throw ConfigError("system: noise_reading must be 'variance' or 'std_dev'");
        std::tie(p.steer_lo, p.steer_hi) = pair_at(j, "steer", {p.steer_lo, p.steer_hi});
        std::tie(p.accel_lo, p.accel_hi) = pair_at(j, "accel", {p.accel_lo, p.accel_hi});
        std::tie(p.speed_lo, p.speed_hi) = pair_at(j, "speed", {p.speed_lo, p.speed_hi});
        const std::string clamp = j.value("clamp", std::string("clamp"));
        if (clamp == "clamp")
            p.clamp = ClampPolicy::clamp;
        else if (clamp == "none")
            p.clamp = ClampPolicy::none;
        else
            throw ConfigError("system: clamp must be 'clamp' or 'none'");
        if (j.contains("true_params")) c.true_params = vec(j.at("true_params"));
        if (c.true_params.size() != 2) throw ConfigError("system: true_params must be [alpha, beta]");
        p.validate();
        return c;
    });
}

AbstractionConfig abstraction_config_from_json(const json& j) {
    return guarded("abstraction", [&] {
        AbstractionConfig c;
        c.domain = box_from_json(j.at("domain"));
        c.cells = j.at("cells").get<std::vector<int>>();
        if (j.contains("actions")) c.action_counts = j.at("actions").get<std::vector<int>>();
        c.geometry = geometry_from_json(j);
        c.pruning_sigmas = j.value("pruning_sigmas", c.pruning_sigmas);
        if (!(c.pruning_sigmas > 0.0)) throw ConfigError("abstraction: pruning_sigmas must be positive");
        c.initial_state = vec(j.at("initial_state"));
        if (c.initial_state.size() != c.domain.dim())
            throw ConfigError("abstraction: initial_state dimension differs from the domain");
        return c;
    });
}

ReachAvoidSpec solve_config_from_json(const json& j) {
    return guarded("solve", [&] {
        ReachAvoidSpec s;
        s.goal = kGoalLabel;
        s.unsafe = kUnsafeLabel;
        if (j.contains("horizon") && !j.at("horizon").is_null()) {
            s.horizon = j.at("horizon").get<int>();
            if (*s.horizon < 0) throw ConfigError("solve: horizon must be non-negative");
        }
        s.tolerance = j.value("tolerance", s.tolerance);
        s.max_iterations = j.value("max_iterations", s.max_iterations);
        if (!(s.tolerance > 0.0) || s.max_iterations < 1)
            throw ConfigError("solve: tolerance and max_iterations must be positive");
        return s;
    });
}

SimulationConfig simulation_config_from_json(const json& j) {
    return guarded("simulation", [&] {
        SimulationConfig s;
        s.runs = j.value("runs", s.runs);
        s.horizon = j.value("horizon", s.horizon);
        s.record_runs = j.value("record_runs", s.record_runs);
        if (s.runs < 1 || s.horizon < 1 || s.record_runs < 0)
            throw ConfigError("simulation: runs and horizon must be positive");
        return s;
    });
}

PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    c.system = system_config_from_json(j.value("system", json::object()));
    if (!j.contains("abstraction")) throw ConfigError("config has no 'abstraction' section");
    c.abstraction = abstraction_config_from_json(j.at("abstraction"));
    c.solve = solve_config_from_json(j.value("solve", json::object()));
    c.simulation = simulation_config_from_json(j.value("simulation", json::object()));
    c.seed = guarded("seed", [&] { return j.value("seed", std::uint64_t{0}); });
    return c;
}

json system_config_to_json(const SystemConfig& c) {
    const auto& p = c.params;
    return {{"delta", p.delta},
            {"alpha", {p.alpha_lo, p.alpha_hi}},
            {"beta", {p.beta_lo, p.beta_hi}},
            {"true_params", std_vec(c.true_params)},
            {"noise", p.noise},
            {"noise_reading", p.noise_reading == NoiseReading::variance ? "variance" : "std_dev"},
            {"steer", {p.steer_lo, p.steer_hi}},
            {"accel", {p.accel_lo, p.accel_hi}},
            {"speed", {p.speed_lo, p.speed_hi}},
            {"clamp", p.clamp == ClampPolicy::clamp ? "clamp" : "none"}};
}

json abstraction_config_to_json(const AbstractionConfig& c) {
    json j = geometry_to_json(c.geometry);
    j["domain"] = box_to_json(c.domain);
    j["cells"] = c.cells;
    j["actions"] = c.action_counts;
    j["pruning_sigmas"] = c.pruning_sigmas;
    j["initial_state"] = std_vec(c.initial_state);
    return j;
}

json pipeline_config_to_json(const PipelineConfig& c) {
    json solve{{"tolerance", c.solve.tolerance}, {"max_iterations", c.solve.max_iterations}};
    solve["horizon"] = c.solve.horizon ? json(*c.solve.horizon) : json(nullptr);
    return {{"system", system_config_to_json(c.system)},
            {"abstraction", abstraction_config_to_json(c.abstraction)},
            {"solve", solve},
            {"simulation",
             {{"runs", c.simulation.runs}, {"horizon", c.simulation.horizon}, {"record_runs", c.simulation.record_runs}}},
            {"seed", c.seed}};
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    json j;
    try {
        j = read_json_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    try {
        return pipeline_config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

GridPartition make_grid(const AbstractionConfig& c, const ParametricSystem& sys) {
    return guarded("abstraction", [&] { return GridPartition(c.domain, c.cells, sys.periods()); });
}

ActionGrid make_action_grid(const AbstractionConfig& c, const ParametricSystem& sys) {
    return guarded("abstraction", [&] { return ActionGrid(sys.input_bounds(), c.action_counts); });
}

PipelineConfig desk_config() {
    constexpr double pi = std::numbers::pi;
    PipelineConfig c;
    c.system.true_params = Eigen::Vector2d(0.85, 0.85);
    auto& a = c.abstraction;
    // heading cells are centered on multiples of pi/4
    a.domain = Box(Eigen::Vector4d(0.0, 0.0, -9.0 * pi / 8.0, -3.0), Eigen::Vector4d(3.75, 4.5, 7.0 * pi / 8.0, 3.0));
    a.cells = {10, 6, 8, 8};
    a.action_counts = {7, 7};
    a.geometry.goal.push_back(Box(Eigen::Vector2d(1.875, 0.0), Eigen::Vector2d(3.75, 4.5)));
    a.geometry.unsafe.push_back(Box(Eigen::Vector2d(1.125, 0.0), Eigen::Vector2d(1.875, 0.75)));
    a.geometry.unsafe.push_back(Box(Eigen::Vector2d(1.125, 3.75), Eigen::Vector2d(1.875, 4.5)));
    a.initial_state = Eigen::Vector4d(0.9, 2.6, 0.0, 2.8);
    c.simulation.runs = 10000;
    c.simulation.horizon = 64;
    c.simulation.record_runs = 4;
    c.seed = 2024;
    return c;
}

}  // namespace rmdp
