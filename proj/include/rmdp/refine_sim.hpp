#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "rmdp/abstraction.hpp"
#include "rmdp/imdp.hpp"

namespace rmdp {

/// Concrete feedback controller obtained from an abstract policy: a state is
/// mapped to its cell, the cell to an abstract action, the action to its input.
class ConcreteController {
public:
    ConcreteController(GridPartition grid, ImdpPolicy policy, std::vector<Eigen::VectorXd> inputs);

    [[nodiscard]] const GridPartition& grid() const { return grid_; }
    [[nodiscard]] const ImdpPolicy& policy() const { return policy_; }
    [[nodiscard]] const std::vector<Eigen::VectorXd>& inputs() const { return inputs_; }

    /// Abstract action at step k, or -1 when s lies outside the grid.
    /// Finite-horizon policies fall back to their first table past the horizon.
    [[nodiscard]] int abstract_action(int k, const Eigen::VectorXd& s) const;
    /// Input vector at step k; throws DomainError outside the grid.
    [[nodiscard]] const Eigen::VectorXd& input(int k, const Eigen::VectorXd& s) const;

private:
    GridPartition grid_;
    ImdpPolicy policy_;
    std::vector<Eigen::VectorXd> inputs_;
};

ConcreteController refine_abstract_policy(const SolveResult& solve, const GridPartition& grid,
                                          const ActionGrid& actions);
ConcreteController refine_abstract_policy(const SolveResult& solve, const AbstractionOutput& abs);

enum class Outcome : unsigned char { success, unsafe, exited, timeout };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct TrajectoryStep {
    int k = 0;
    Eigen::VectorXd state;
    std::optional<Eigen::VectorXd> input;  ///< empty on the last recorded state
};

struct RunRecord {
    Outcome outcome = Outcome::timeout;
    int steps = 0;
    std::vector<TrajectoryStep> trajectory;  ///< filled for recorded runs only
};

struct SimulationOptions {
    int runs = 10000;
    int horizon = 64;
    std::uint64_t seed = 0;
    int threads = 0;
    int record_runs = 0;  ///< keep full trajectories for the first runs
    double confidence = 0.95;  ///< Clopper-Pearson level
};

struct SimulationStats {
    int runs = 0;
    int satisfied = 0;
    double frequency = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double rho_star = 0.0;
    std::uint64_t seed = 0;
    std::vector<RunRecord> log;

    bool operator==(const SimulationStats& o) const;
};

/// Simulates `runs` closed-loop trajectories from `initial` under fixed true
/// parameters. A run succeeds on entering a goal cell, fails on an unsafe
/// cell, on leaving the grid or when the horizon runs out. Labels follow the
/// cell labeling of the abstraction so concrete and abstract labels agree.
SimulationStats run_monte_carlo(const ParametricSystem& sys, const ConcreteController& ctrl,
                                const LabelGeometry& geometry, const Eigen::VectorXd& true_params,
                                const Eigen::VectorXd& initial, const SimulationOptions& opts, double rho_star = 0.0);

/// Two-sided Clopper-Pearson interval for k successes in n trials.
std::pair<double, double> clopper_pearson(int k, int n, double confidence = 0.95);
/// One-sided Hoeffding deviation sqrt(ln(1/delta) / (2n)).
double hoeffding_epsilon(int n, double delta = 0.01);

nlohmann::json stats_to_json(const SimulationStats& s);

struct TrajectoryRow {
    int run;
    int k;
    std::vector<double> state;
    std::optional<std::vector<double>> input;
    Outcome outcome;
};

/// CSV with header run,k,<state names>,<input names>,outcome.
void write_trajectories(const SimulationStats& s, const std::vector<std::string>& state_names,
                        const std::vector<std::string>& input_names, const std::filesystem::path& path);
std::vector<TrajectoryRow> read_trajectories(const std::filesystem::path& path, std::size_t state_dim,
                                             std::size_t input_dim);

}  // namespace rmdp
