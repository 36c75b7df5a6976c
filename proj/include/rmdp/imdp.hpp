#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "rmdp/finite_model.hpp"
#include "rmdp/reach_avoid.hpp"

namespace rmdp {

struct IntervalEntry {
    std::int32_t succ;
    double lo;
    double hi;

    bool operator==(const IntervalEntry&) const = default;
};

/// Finite interval MDP in compressed sparse row form. State s owns rows
/// [state_rows[s], state_rows[s+1]); row r owns entries
/// [row_offsets[r], row_offsets[r+1]). Action ids are local to each state.
struct IntervalMDP {
    std::vector<std::string> alphabet;
    std::vector<LabelSet> labels;
    int initial = 0;
    int sink = -1;  ///< absorbing out-of-domain state, or -1
    std::vector<std::size_t> state_rows{0};
    std::vector<std::size_t> row_offsets{0};
    std::vector<IntervalEntry> entries;

    [[nodiscard]] int num_states() const { return static_cast<int>(labels.size()); }
    [[nodiscard]] int num_actions(int s) const {
        return static_cast<int>(state_rows[static_cast<std::size_t>(s) + 1] - state_rows[static_cast<std::size_t>(s)]);
    }
    [[nodiscard]] std::size_t num_rows() const { return row_offsets.size() - 1; }
    [[nodiscard]] std::size_t num_transitions() const { return entries.size(); }
    [[nodiscard]] std::span<const IntervalEntry> row(int s, int a) const {
        const std::size_t r = state_rows[static_cast<std::size_t>(s)] + static_cast<std::size_t>(a);
        return {entries.data() + row_offsets[r], entries.data() + row_offsets[r + 1]};
    }

    /// Appends a state with no actions yet; returns its id.
    int add_state(LabelSet l);
    /// Appends an action row to the most recently added state.
    void add_row(std::span<const IntervalEntry> row);

    bool operator==(const IntervalMDP&) const = default;
};

/// Every violated invariant: interval bounds, row feasibility
/// (sum lo <= 1 <= sum hi), successor ids, sink shape, initial state.
ValidationReport validate_imdp(const IntervalMDP& m, double tol = kProbTolerance);

struct RobustExpectation {
    double value = 0.0;
    std::vector<double> distribution;  ///< minimizer, aligned with the row
};

/// Minimizes sum_i p_i * values[succ_i] over the interval polytope of `row`:
/// start every p at lo and hand out the remaining mass in ascending order of
/// value, each successor up to its hi. Throws DomainError on an infeasible row.
RobustExpectation robust_expectation_lower(std::span<const double> values, std::span<const IntervalEntry> row);

/// Deterministic policy: stationary (one table) or time-indexed tables where
/// steps[k] is used at time k.
struct ImdpPolicy {
    std::optional<int> horizon;
    std::vector<std::vector<int>> steps;

    [[nodiscard]] int action(int k, int s) const {
        const auto& table = horizon ? steps.at(static_cast<std::size_t>(k)) : steps.front();
        return table.at(static_cast<std::size_t>(s));
    }
};

struct SolveResult {
    Eigen::VectorXd values;  ///< lower bounds at time 0
    ImdpPolicy policy;
    double rho_star = 0.0;  ///< value of the initial state
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    std::optional<int> horizon;
    double tolerance = 0.0;
};

/// Robust value iteration for the reach-avoid objective: actions maximize,
/// the interval adversary minimizes. Goal states are pinned to 1 and unsafe
/// states (including an unsafe-labeled sink) to 0.
SolveResult robust_value_iteration(const IntervalMDP& m, const ReachAvoidSpec& spec, int threads = 0);

/// Robust lower values of a fixed deterministic policy.
Eigen::VectorXd evaluate_fixed_policy(const IntervalMDP& m, const ImdpPolicy& policy, const ReachAvoidSpec& spec,
                                      int threads = 0);

nlohmann::json solve_result_to_json(const SolveResult& r);
SolveResult solve_result_from_json(const nlohmann::json& j);

}  // namespace rmdp
