#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "rmdp/abstraction.hpp"
#include "rmdp/dynamics.hpp"
#include "rmdp/reach_avoid.hpp"

namespace rmdp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pipeline configuration. One JSON document with four sections:
//
//   "system":      {"delta", "alpha": [lo, hi], "beta": [lo, hi],
//                   "true_params": [alpha, beta], "noise", "noise_reading":
//                   "variance"|"std_dev", "steer": [lo, hi], "accel": [lo, hi],
//                   "speed": [lo, hi], "clamp": "clamp"|"none"}
//   "abstraction": {"domain": {"lo", "hi"}, "cells": [..], "actions": [..],
//                   "goal": [box..], "unsafe": [box..], "pruning_sigmas",
//                   "initial_state": [..]}
//   "solve":       {"horizon": int|null, "tolerance", "max_iterations"}
//   "simulation":  {"runs", "horizon", "record_runs"}
//
// plus a top-level "seed". Missing keys take the defaults of the structs below.

struct SystemConfig {
    DubinsParams params;
    Eigen::VectorXd true_params = Eigen::Vector2d(0.85, 0.85);
};

struct AbstractionConfig {
    Box domain;
    std::vector<int> cells;
    std::vector<int> action_counts{7, 7};
    LabelGeometry geometry;
    double pruning_sigmas = 6.0;
    Eigen::VectorXd initial_state;
};

struct SimulationConfig {
    int runs = 10000;
    int horizon = 64;
    int record_runs = 4;
};

struct PipelineConfig {
    SystemConfig system;
    AbstractionConfig abstraction;
    ReachAvoidSpec solve;
    SimulationConfig simulation;
    std::uint64_t seed = 0;
};

SystemConfig system_config_from_json(const nlohmann::json& j);
AbstractionConfig abstraction_config_from_json(const nlohmann::json& j);
ReachAvoidSpec solve_config_from_json(const nlohmann::json& j);
SimulationConfig simulation_config_from_json(const nlohmann::json& j);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

nlohmann::json system_config_to_json(const SystemConfig& c);
nlohmann::json abstraction_config_to_json(const AbstractionConfig& c);
nlohmann::json pipeline_config_to_json(const PipelineConfig& c);

/// Reads a config file; ConfigError names the file and the failing key.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

GridPartition make_grid(const AbstractionConfig& c, const ParametricSystem& sys);
ActionGrid make_action_grid(const AbstractionConfig& c, const ParametricSystem& sys);

/// The desk-scale Dubins experiment shipped with the project.
PipelineConfig desk_config();

}  // namespace rmdp
