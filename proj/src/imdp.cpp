#include "rmdp/imdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmdp/parallel.hpp"

namespace rmdp {

int IntervalMDP::add_state(LabelSet l) {
    labels.push_back(l);
    state_rows.push_back(state_rows.back());
    return num_states() - 1;
}

void IntervalMDP::add_row(std::span<const IntervalEntry> row) {
    entries.insert(entries.end(), row.begin(), row.end());
    row_offsets.push_back(entries.size());
    ++state_rows.back();
}

ValidationReport validate_imdp(const IntervalMDP& m, double tol) {
    ValidationReport r;
    const int n = m.num_states();
    if (n == 0) r.problems.emplace_back("model has no states");
    if (m.state_rows.size() != static_cast<std::size_t>(n) + 1 || m.row_offsets.back() != m.entries.size() ||
        m.state_rows.back() != m.num_rows()) {
        r.problems.emplace_back("row index arrays are inconsistent");
        return r;
    }
    if (m.initial < 0 || m.initial >= n) r.problems.emplace_back("initial state out of range");
    for (int s = 0; s < n; ++s) {
        if (m.num_actions(s) == 0) r.problems.push_back("state " + std::to_string(s) + " has no actions");
        for (int a = 0; a < m.num_actions(s); ++a) {
            const std::string where = "row (" + std::to_string(s) + "," + std::to_string(a) + ")";
            double sum_lo = 0.0;
            double sum_hi = 0.0;
            for (const auto& e : m.row(s, a)) {
                if (e.succ < 0 || e.succ >= n) r.problems.push_back(where + ": successor out of range");
                if (!(e.lo >= 0.0 && e.lo <= e.hi && e.hi <= 1.0))
                    r.problems.push_back(where + ": interval [" + std::to_string(e.lo) + "," + std::to_string(e.hi) +
                                         "] violates 0 <= lo <= hi <= 1");
                sum_lo += e.lo;
                sum_hi += e.hi;
            }
            if (sum_lo > 1.0 + tol || sum_hi < 1.0 - tol)
                r.problems.push_back(where + ": infeasible (sum lo " + std::to_string(sum_lo) + ", sum hi " +
                                     std::to_string(sum_hi) + ")");
        }
    }
    if (m.sink >= 0) {
        if (m.sink >= n) {
            r.problems.emplace_back("sink out of range");
        } else {
            const bool ok = m.num_actions(m.sink) == 1 && m.row(m.sink, 0).size() == 1 &&
                            m.row(m.sink, 0)[0] == IntervalEntry{m.sink, 1.0, 1.0};
            if (!ok) r.problems.emplace_back("sink must have a single [1,1] self-loop");
        }
    }
    return r;
}

namespace {

// Inner minimization without allocation; `order` is caller-owned scratch.
double lower_value(std::span<const double> values, std::span<const IntervalEntry> row, std::vector<int>& order) {
    double e = 0.0;
    double rem = 1.0;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (const auto& t : row) {
        const double v = values[static_cast<std::size_t>(t.succ)];
        e += t.lo * v;
        rem -= t.lo;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (rem <= 0.0) return e;
    if (vmin == vmax) return e + rem * vmin;
    order.resize(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(row[a].succ)] < values[static_cast<std::size_t>(row[b].succ)];
    });
    for (int i : order) {
        const double add = std::min(row[i].hi - row[i].lo, rem);
        e += add * values[static_cast<std::size_t>(row[i].succ)];
        rem -= add;
        if (rem <= 0.0) break;
    }
    return e;
}

struct Backup {
    double value;
    int action;
};

Backup best_action(const IntervalMDP& m, int s, std::span<const double> values, std::vector<int>& scratch) {
    Backup best{-1.0, 0};
    for (int a = 0; a < m.num_actions(s); ++a) {
        const double q = lower_value(values, m.row(s, a), scratch);
        if (q > best.value) best = {q, a};
    }
    return best;
}

std::vector<Terminal> terminals(const IntervalMDP& m, const ReachAvoidSpec& spec) {
    return classify_states(m.labels, m.alphabet, spec);
}

Eigen::VectorXd initial_values(const std::vector<Terminal>& term) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(term.size()));
    for (std::size_t s = 0; s < term.size(); ++s) v[static_cast<Eigen::Index>(s)] = term[s] == Terminal::goal ? 1.0 : 0.0;
    return v;
}

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// One Jacobi sweep. `choose` returns (value, action) for a non-terminal state;
// actions are written to `actions` when non-null. Returns the sup-norm change.
template <class Choose>
double sweep(const std::vector<Terminal>& term, const Eigen::VectorXd& in, Eigen::VectorXd& out,
             std::vector<int>* actions, int threads, Choose&& choose) {
    parallel_chunks(term.size(), threads, [&](std::size_t b, std::size_t e) {
        std::vector<int> scratch;
        for (std::size_t s = b; s < e; ++s) {
            const auto i = static_cast<Eigen::Index>(s);
            if (term[s] != Terminal::none) {
                out[i] = in[i];
                if (actions) (*actions)[s] = 0;
                continue;
            }
            const Backup bk = choose(static_cast<int>(s), scratch);
            out[i] = bk.value;
            if (actions) (*actions)[s] = bk.action;
        }
    });
    return term.empty() ? 0.0 : (out - in).cwiseAbs().maxCoeff();
}

// Among near-optimal actions, prefer ones that force positive probability of
// moving closer to the goal (attractor layers), so the stationary policy
// attains the fixed point instead of idling in value-preserving loops.
std::vector<int> extract_stationary_policy(const IntervalMDP& m, const std::vector<Terminal>& term,
                                           const Eigen::VectorXd& values, double tol) {
    const int n = m.num_states();
    std::vector<int> policy(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> optimal(static_cast<std::size_t>(n));
    std::vector<int> scratch;
    const auto vals = as_span(values);
    for (int s = 0; s < n; ++s) {
        if (term[s] != Terminal::none) continue;
        std::vector<double> q(static_cast<std::size_t>(m.num_actions(s)));
        double best = -1.0;
        for (int a = 0; a < m.num_actions(s); ++a) {
            q[a] = lower_value(vals, m.row(s, a), scratch);
            if (q[a] > best) {
                best = q[a];
                policy[s] = a;
            }
        }
        for (int a = 0; a < m.num_actions(s); ++a)
            if (q[a] >= best - tol) optimal[s].push_back(a);
    }

    std::vector<char> in_attractor(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) in_attractor[s] = term[s] == Terminal::goal;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::pair<int, int>> joined;
        for (int s = 0; s < n; ++s) {
            if (in_attractor[s] || term[s] != Terminal::none || values[s] <= 0.0) continue;
            for (int a : optimal[s]) {
                double lo_in = 0.0;
                double hi_out = 0.0;
                for (const auto& e : m.row(s, a)) {
                    if (in_attractor[e.succ])
                        lo_in += e.lo;
                    else
                        hi_out += e.hi;
                }
                if (std::max(lo_in, 1.0 - hi_out) > 0.0) {
                    joined.emplace_back(s, a);
                    break;
                }
            }
        }
        for (auto [s, a] : joined) {
            in_attractor[s] = 1;
            policy[s] = a;
            changed = true;
        }
    }
    return policy;
}

}  // namespace

RobustExpectation robust_expectation_lower(std::span<const double> values, std::span<const IntervalEntry> row) {
    double sum_lo = 0.0;
    double sum_hi = 0.0;
    for (const auto& e : row) {
        if (e.succ < 0 || static_cast<std::size_t>(e.succ) >= values.size())
            throw DomainError("row successor outside the value vector");
        if (!(e.lo >= 0.0 && e.lo <= e.hi)) throw DomainError("row interval with lo > hi or lo < 0");
        sum_lo += e.lo;
        sum_hi += e.hi;
    }
    if (sum_lo > 1.0 + kProbTolerance || sum_hi < 1.0 - kProbTolerance)
        throw DomainError("infeasible interval row (sum lo " + std::to_string(sum_lo) + ", sum hi " +
                          std::to_string(sum_hi) + ")");

    RobustExpectation out;
    out.distribution.resize(row.size());
    double rem = 1.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        out.distribution[i] = row[i].lo;
        rem -= row[i].lo;
    }
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[static_cast<std::size_t>(row[a].succ)] < values[static_cast<std::size_t>(row[b].succ)];
    });
    for (std::size_t i : order) {
        if (rem <= 0.0) break;
        const double add = std::min(row[i].hi - row[i].lo, rem);
        out.distribution[i] += add;
        rem -= add;
    }
    for (std::size_t i = 0; i < row.size(); ++i)
        out.value += out.distribution[i] * values[static_cast<std::size_t>(row[i].succ)];
    return out;
}

SolveResult robust_value_iteration(const IntervalMDP& m, const ReachAvoidSpec& spec, int threads) {
    if (const auto report = validate_imdp(m); !report.ok()) throw DomainError("invalid IMDP: " + report.problems.front());
    const auto term = terminals(m, spec);
    const auto n = static_cast<std::size_t>(m.num_states());

    SolveResult result;
    result.horizon = spec.horizon;
    result.tolerance = spec.tolerance;
    Eigen::VectorXd cur = initial_values(term);
    Eigen::VectorXd next(cur.size());
    auto choose = [&](const Eigen::VectorXd& in) {
        return [&m, &in](int s, std::vector<int>& scratch) { return best_action(m, s, as_span(in), scratch); };
    };

    if (spec.horizon) {
        const int H = *spec.horizon;
        if (H < 0) throw DomainError("negative horizon");
        result.policy.horizon = H;
        result.policy.steps.assign(static_cast<std::size_t>(H), std::vector<int>(n, 0));
        for (int i = 1; i <= H; ++i) {
            result.residual = sweep(term, cur, next, &result.policy.steps[static_cast<std::size_t>(H - i)], threads,
                                    choose(cur));
            std::swap(cur, next);
        }
        result.iterations = H;
    } else {
        result.converged = false;
        while (result.iterations < spec.max_iterations) {
            result.residual = sweep(term, cur, next, nullptr, threads, choose(cur));
            std::swap(cur, next);
            ++result.iterations;
            if (result.residual < spec.tolerance) {
                result.converged = true;
                break;
            }
        }
        result.policy.steps.push_back(extract_stationary_policy(m, term, cur, spec.tolerance));
    }
    result.values = std::move(cur);
    result.rho_star = result.values[m.initial];
    return result;
}

Eigen::VectorXd evaluate_fixed_policy(const IntervalMDP& m, const ImdpPolicy& policy, const ReachAvoidSpec& spec,
                                      int threads) {
    const auto term = terminals(m, spec);
    const auto n = static_cast<std::size_t>(m.num_states());
    for (const auto& table : policy.steps) {
        if (table.size() != n) throw DomainError("policy table size differs from the state count");
        for (std::size_t s = 0; s < n; ++s)
            if (term[s] == Terminal::none && (table[s] < 0 || table[s] >= m.num_actions(static_cast<int>(s))))
                throw DomainError("policy selects unavailable action " + std::to_string(table[s]) + " in state " +
                                  std::to_string(s));
    }
    if (policy.steps.empty()) throw DomainError("empty policy");

    Eigen::VectorXd cur = initial_values(term);
    Eigen::VectorXd next(cur.size());
    auto fixed = [&](int k, const Eigen::VectorXd& in) {
        return [&m, &policy, &in, k](int s, std::vector<int>& scratch) {
            const int a = policy.action(k, s);
            return Backup{lower_value(as_span(in), m.row(s, a), scratch), a};
        };
    };
    if (policy.horizon) {
        const int H = *policy.horizon;
        for (int i = 1; i <= H; ++i) {
            sweep(term, cur, next, nullptr, threads, fixed(H - i, cur));
            std::swap(cur, next);
        }
    } else if (spec.horizon) {
        for (int i = 0; i < *spec.horizon; ++i) {
            sweep(term, cur, next, nullptr, threads, fixed(0, cur));
            std::swap(cur, next);
        }
    } else {
        for (int it = 0; it < spec.max_iterations; ++it) {
            const double res = sweep(term, cur, next, nullptr, threads, fixed(0, cur));
            std::swap(cur, next);
            if (res < spec.tolerance) break;
        }
    }
    return cur;
}

nlohmann::json solve_result_to_json(const SolveResult& r) {
    nlohmann::json j;
    j["rho_star"] = r.rho_star;
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["converged"] = r.converged;
    j["horizon"] = r.horizon ? nlohmann::json(*r.horizon) : nlohmann::json("unbounded");
    j["stopping"] = r.horizon ? nlohmann::json("fixed horizon")
                              : nlohmann::json{{"criterion", "sup-norm residual"}, {"tolerance", r.tolerance}};
    j["values"] = std::vector<double>(r.values.data(), r.values.data() + r.values.size());
    j["value_min"] = r.values.size() ? r.values.minCoeff() : 0.0;
    j["value_max"] = r.values.size() ? r.values.maxCoeff() : 0.0;
    j["policy"] = r.policy.steps;
    return j;
}

SolveResult solve_result_from_json(const nlohmann::json& j) {
    SolveResult r;
    r.rho_star = j.at("rho_star").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.residual = j.at("residual").get<double>();
    r.converged = j.at("converged").get<bool>();
    if (j.at("horizon").is_number_integer()) r.horizon = j.at("horizon").get<int>();
    if (!r.horizon && j.at("stopping").is_object()) r.tolerance = j.at("stopping").at("tolerance").get<double>();
    const auto values = j.at("values").get<std::vector<double>>();
    r.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    r.policy.horizon = r.horizon;
    r.policy.steps = j.at("policy").get<std::vector<std::vector<int>>>();
    return r;
}

}  // namespace rmdp
