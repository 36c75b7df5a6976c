#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmdp/finite_model.hpp"

namespace rmdp {

/// Reach a goal-labeled state without visiting an unsafe-labeled state at or
/// before that step. No horizon means unbounded (iterate to convergence).
struct ReachAvoidSpec {
    std::string goal = "G";
    std::string unsafe = "U";
    std::optional<int> horizon;
    double tolerance = 1e-6;  ///< sup-norm residual for the unbounded case
    int max_iterations = 100000;
};

/// Per-state terminal classification. Unsafe wins over goal: a state carrying
/// both labels violates the objective at that step.
enum class Terminal : unsigned char { none, goal, unsafe };

/// Resolves the spec's label names against an alphabet; throws DomainError
/// when either is missing.
std::vector<Terminal> classify_states(const std::vector<LabelSet>& labels, const std::vector<std::string>& alphabet,
                                      const ReachAvoidSpec& spec);

}  // namespace rmdp
