#include "rmdp/refine_sim.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/math/distributions/beta.hpp>

#include "rmdp/model_io.hpp"
#include "rmdp/parallel.hpp"

namespace rmdp {

ConcreteController::ConcreteController(GridPartition grid, ImdpPolicy policy, std::vector<Eigen::VectorXd> inputs)
    : grid_(std::move(grid)), policy_(std::move(policy)), inputs_(std::move(inputs)) {
    if (policy_.steps.empty()) throw DomainError("controller needs at least one policy table");
    for (const auto& table : policy_.steps) {
        if (table.size() < static_cast<std::size_t>(grid_.num_cells()))
            throw DomainError("policy does not cover every cell");
        for (int c = 0; c < grid_.num_cells(); ++c)
            if (table[c] < 0 || table[c] >= static_cast<int>(inputs_.size()))
                throw DomainError("cell " + std::to_string(c) + " has no valid action");
    }
}

int ConcreteController::abstract_action(int k, const Eigen::VectorXd& s) const {
    const int cell = grid_.cell_of(s);
    if (cell == grid_.sink()) return -1;
    const std::size_t t = policy_.horizon && k < static_cast<int>(policy_.steps.size()) ? static_cast<std::size_t>(k) : 0;
    return policy_.steps[t][cell];
}

const Eigen::VectorXd& ConcreteController::input(int k, const Eigen::VectorXd& s) const {
    const int a = abstract_action(k, s);
    if (a < 0) throw DomainError("state outside the grid has no control input");
    return inputs_[a];
}

ConcreteController refine_abstract_policy(const SolveResult& solve, const GridPartition& grid,
                                          const ActionGrid& actions) {
    return {grid, solve.policy, actions.inputs};
}

ConcreteController refine_abstract_policy(const SolveResult& solve, const AbstractionOutput& abs) {
    return refine_abstract_policy(solve, abs.grid, abs.actions);
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::success: return "success";
        case Outcome::unsafe: return "unsafe";
        case Outcome::exited: return "exited";
        case Outcome::timeout: return "timeout";
    }
    return "?";
}

Outcome outcome_from_string(const std::string& s) {
    if (s == "success") return Outcome::success;
    if (s == "unsafe") return Outcome::unsafe;
    if (s == "exited") return Outcome::exited;
    if (s == "timeout") return Outcome::timeout;
    throw ParseError("unknown outcome '" + s + "'");
}

bool SimulationStats::operator==(const SimulationStats& o) const {
    if (runs != o.runs || satisfied != o.satisfied || frequency != o.frequency || ci_low != o.ci_low ||
        ci_high != o.ci_high || rho_star != o.rho_star || seed != o.seed || log.size() != o.log.size())
        return false;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& a = log[i];
        const auto& b = o.log[i];
        if (a.outcome != b.outcome || a.steps != b.steps || a.trajectory.size() != b.trajectory.size()) return false;
        for (std::size_t j = 0; j < a.trajectory.size(); ++j) {
            const auto& x = a.trajectory[j];
            const auto& y = b.trajectory[j];
            if (x.k != y.k || x.state != y.state || x.input.has_value() != y.input.has_value()) return false;
            if (x.input && *x.input != *y.input) return false;
        }
    }
    return true;
}

SimulationStats run_monte_carlo(const ParametricSystem& sys, const ConcreteController& ctrl,
                                const LabelGeometry& geometry, const Eigen::VectorXd& true_params,
                                const Eigen::VectorXd& initial, const SimulationOptions& opts, double rho_star) {
    if (opts.runs < 1) throw DomainError("run count must be positive");
    if (opts.horizon < 1) throw DomainError("simulation horizon must be at least 1");
    const auto& grid = ctrl.grid();
    if (initial.size() != grid.dim()) throw DomainError("initial state dimension differs from the grid");
    const auto labels = label_cells(grid, geometry);

    SimulationStats stats;
    stats.runs = opts.runs;
    stats.seed = opts.seed;
    stats.rho_star = rho_star;
    stats.log.resize(static_cast<std::size_t>(opts.runs));

    parallel_chunks(stats.log.size(), opts.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            std::mt19937_64 eng(mix_seed(opts.seed, r));
            const bool record = static_cast<int>(r) < opts.record_runs;
            RunRecord& rec = stats.log[r];
            Eigen::VectorXd s = initial;
            for (int k = 0;; ++k) {
                const int cell = grid.cell_of(s);
                Outcome verdict = Outcome::timeout;
                bool done = true;
                if (cell == grid.sink())
                    verdict = Outcome::exited;
                else if (labels[cell].has(1))
                    verdict = Outcome::unsafe;
                else if (labels[cell].has(0))
                    verdict = Outcome::success;
                else
                    done = k >= opts.horizon;
                if (done) {
                    rec.outcome = verdict;
                    rec.steps = k;
                    if (record) rec.trajectory.push_back({k, s, std::nullopt});
                    break;
                }
                const Eigen::VectorXd& u = ctrl.input(k, s);
                if (record) rec.trajectory.push_back({k, s, u});
                s = step_sample(sys, s, u, true_params, eng);
            }
        }
    });

    for (const auto& rec : stats.log)
        if (rec.outcome == Outcome::success) ++stats.satisfied;
    stats.frequency = static_cast<double>(stats.satisfied) / stats.runs;
    std::tie(stats.ci_low, stats.ci_high) = clopper_pearson(stats.satisfied, stats.runs, opts.confidence);
    return stats;
}

std::pair<double, double> clopper_pearson(int k, int n, double confidence) {
    if (n < 1 || k < 0 || k > n) throw DomainError("clopper_pearson needs 0 <= k <= n, n >= 1");
    const double alpha = 1.0 - confidence;
    using boost::math::beta_distribution;
    using boost::math::quantile;
    const double lo = k == 0 ? 0.0 : quantile(beta_distribution<double>(k, n - k + 1), alpha / 2);
    const double hi = k == n ? 1.0 : quantile(beta_distribution<double>(k + 1, n - k), 1.0 - alpha / 2);
    return {lo, hi};
}

double hoeffding_epsilon(int n, double delta) { return std::sqrt(std::log(1.0 / delta) / (2.0 * n)); }

nlohmann::json stats_to_json(const SimulationStats& s) {
    return {{"runs", s.runs},     {"satisfied", s.satisfied}, {"frequency", s.frequency}, {"ci_low", s.ci_low},
            {"ci_high", s.ci_high}, {"rho_star", s.rho_star},   {"seed", s.seed}};
}

namespace {

void put(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& f, std::size_t line) {
    double v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw ParseError("trajectory csv line " + std::to_string(line) + ": bad number '" + f + "'");
    return v;
}

}  // namespace

void write_trajectories(const SimulationStats& s, const std::vector<std::string>& state_names,
                        const std::vector<std::string>& input_names, const std::filesystem::path& path) {
    std::string out = "run,k";
    for (const auto& n : state_names) out += "," + n;
    for (const auto& n : input_names) out += "," + n;
    out += ",outcome\n";
    for (std::size_t r = 0; r < s.log.size(); ++r) {
        const auto& rec = s.log[r];
        for (const auto& st : rec.trajectory) {
            out += std::to_string(r) + "," + std::to_string(st.k);
            for (Eigen::Index d = 0; d < st.state.size(); ++d) {
                out += ',';
                put(out, st.state[d]);
            }
            for (std::size_t d = 0; d < input_names.size(); ++d) {
                out += ',';
                if (st.input) put(out, (*st.input)[static_cast<Eigen::Index>(d)]);
            }
            out += "," + to_string(rec.outcome) + "\n";
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << out;
}

std::vector<TrajectoryRow> read_trajectories(const std::filesystem::path& path, std::size_t state_dim,
                                             std::size_t input_dim) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(f, line)) throw ParseError("trajectory csv is empty");
    const std::size_t width = 3 + state_dim + input_dim;
    if (split_csv(line).size() != width) throw ParseError("trajectory csv header has the wrong column count");
    std::vector<TrajectoryRow> rows;
    std::size_t no = 1;
    while (std::getline(f, line)) {
        ++no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != width) throw ParseError("trajectory csv line " + std::to_string(no) + ": wrong column count");
        TrajectoryRow row{};
        row.run = static_cast<int>(parse_double(fields[0], no));
        row.k = static_cast<int>(parse_double(fields[1], no));
        for (std::size_t d = 0; d < state_dim; ++d) row.state.push_back(parse_double(fields[2 + d], no));
        if (input_dim > 0 && !fields[2 + state_dim].empty()) {
            row.input.emplace();
            for (std::size_t d = 0; d < input_dim; ++d) row.input->push_back(parse_double(fields[2 + state_dim + d], no));
        }
        row.outcome = outcome_from_string(fields.back());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rmdp
