#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "rmdp/config.hpp"
#include "rmdp/model_io.hpp"

using namespace rmdp;
using namespace testing_support;
using nlohmann::json;

namespace {

json desk_json() { return read_json_file(data_path("desk.json")); }

std::string config_error(const json& j) {
    try {
        (void)pipeline_config_from_json(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("bundled desk config matches the built-in one") {
    const auto loaded = load_pipeline_config(data_path("desk.json"));
    CHECK(pipeline_config_to_json(loaded) == pipeline_config_to_json(desk_config()));
    CHECK(loaded.seed == 2024);
    CHECK(loaded.abstraction.cells == std::vector<int>{10, 6, 8, 8});
    CHECK_FALSE(loaded.solve.horizon.has_value());
    CHECK(loaded.system.params.noise_reading == NoiseReading::variance);
}

TEST_CASE("config JSON round trip") {
    auto c = desk_config();
    c.solve.horizon = 12;
    c.system.params.alpha_lo = 0.7;
    c.system.params.noise_reading = NoiseReading::std_dev;
    c.system.params.clamp = ClampPolicy::none;
    c.abstraction.pruning_sigmas = 5.0;
    const auto j = pipeline_config_to_json(c);
    const auto back = pipeline_config_from_json(j);
    CHECK(pipeline_config_to_json(back) == j);
    CHECK(back.solve.horizon == 12);
    CHECK(back.system.params.alpha_lo == 0.7);
}

TEST_CASE("missing keys take defaults") {
    json j = desk_json();
    j.erase("solve");
    j.erase("simulation");
    j["system"] = json::object();
    const auto c = pipeline_config_from_json(j);
    CHECK(c.solve.tolerance == ReachAvoidSpec{}.tolerance);
    CHECK(c.simulation.runs == 10000);
    CHECK(c.system.params.delta == DubinsParams{}.delta);
}

TEST_CASE("bad fields raise ConfigError") {
    SUBCASE("not an object") { CHECK_FALSE(config_error(json::array()).empty()); }
    SUBCASE("no abstraction") {
        json j = desk_json();
        j.erase("abstraction");
        CHECK(config_error(j).find("abstraction") != std::string::npos);
    }
    SUBCASE("interval with three entries") {
        json j = desk_json();
        j["system"]["alpha"] = {0.1, 0.2, 0.3};
        CHECK(config_error(j).find("alpha") != std::string::npos);
    }
    SUBCASE("unknown noise reading") {
        json j = desk_json();
        j["system"]["noise_reading"] = "sigma";
        CHECK(config_error(j).find("noise_reading") != std::string::npos);
    }
    SUBCASE("wrong type") {
        json j = desk_json();
        j["abstraction"]["cells"] = "many";
        CHECK(config_error(j).find("abstraction") != std::string::npos);
    }
    SUBCASE("negative horizon") {
        json j = desk_json();
        j["solve"]["horizon"] = -3;
        CHECK(config_error(j).find("horizon") != std::string::npos);
    }
    SUBCASE("zero runs") {
        json j = desk_json();
        j["simulation"]["runs"] = 0;
        CHECK(config_error(j).find("simulation") != std::string::npos);
    }
    SUBCASE("initial state dimension") {
        json j = desk_json();
        j["abstraction"]["initial_state"] = {1.0, 2.0};
        CHECK(config_error(j).find("initial_state") != std::string::npos);
    }
    SUBCASE("non-positive pruning") {
        json j = desk_json();
        j["abstraction"]["pruning_sigmas"] = 0.0;
        CHECK(config_error(j).find("pruning_sigmas") != std::string::npos);
    }
}

TEST_CASE("load errors name the file") {
    const auto dir = std::filesystem::temp_directory_path() / "rmdp_test_config";
    std::filesystem::create_directories(dir);
    const auto path = dir / "broken.json";
    std::ofstream(path) << "{\"abstraction\": {\"cells\": ";
    try {
        (void)load_pipeline_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
    }
    CHECK_THROWS_AS(load_pipeline_config(dir / "absent.json"), ConfigError);
}

TEST_CASE("grids from the desk config") {
    const auto c = desk_config();
    const DubinsSystem sys(c.system.params);
    const auto g = make_grid(c.abstraction, sys);
    CHECK(g.num_cells() == 3840);
    CHECK(make_action_grid(c.abstraction, sys).size() == 49);
    auto bad = c.abstraction;
    bad.cells = {10, 6, 0, 8};
    CHECK_THROWS_AS(make_grid(bad, sys), ConfigError);
}
