#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rmdp/finite_model.hpp"

namespace rmdp {

/// Malformed input file; the message names the offending element.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON model format:
//   {"alphabet": [..], "states": [{"name", "labels": [..]}], "actions": [..],
//    "disturbances": [..], "init": [[state, p], ..],
//    "kernel": [{"x", "u", "v", "successors": [[state, p], ..]}]}
// States, actions and disturbances are referenced by name. Doubles are
// written in shortest round-trip form, so write/read is bit-exact.

nlohmann::json model_to_json(const FiniteRMDP& m);
FiniteRMDP model_from_json(const nlohmann::json& j);

FiniteRMDP read_model(const std::filesystem::path& path);
void write_model(const FiniteRMDP& m, const std::filesystem::path& path);

/// Relation file: JSON list of [state-name-in-m1, state-name-in-m2] pairs.
nlohmann::json relation_to_json(const StateRelation& r, const FiniteRMDP& m1, const FiniteRMDP& m2);
StateRelation relation_from_json(const nlohmann::json& j, const FiniteRMDP& m1, const FiniteRMDP& m2);
StateRelation read_relation(const std::filesystem::path& path, const FiniteRMDP& m1, const FiniteRMDP& m2);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace rmdp
