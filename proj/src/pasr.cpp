#include "rmdp/pasr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmdp {

namespace {

void require_compatible(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel) {
    for (const auto* m : {&m1, &m2}) {
        const auto report = validate_model(*m);
        if (!report.ok()) throw DomainError("invalid model: " + report.problems.front());
    }
    if (m1.alphabet != m2.alphabet) throw DomainError("models do not share the label alphabet");
    if (rel.size1() != m1.num_states() || rel.size2() != m2.num_states())
        throw DomainError("relation ground sets do not match the models");
    if (!rel.single_valued()) throw DomainError("relation is not single-valued");
}

std::vector<int> partners(const StateRelation& rel) {
    std::vector<int> p(static_cast<std::size_t>(rel.size1()));
    for (int x1 = 0; x1 < rel.size1(); ++x1) p[x1] = rel.partner(x1);
    return p;
}

}  // namespace

const std::vector<InterfaceEntry>& InterfaceTable::at(int x1, int x2, int u2) const {
    if (partner(x1) != x2)
        throw DomainError("(" + std::to_string(x1) + "," + std::to_string(x2) + ") is not in the relation");
    return at(x1, u2);
}

std::optional<std::vector<int>> disturbance_response(const FiniteRMDP& m1, const FiniteRMDP& m2,
                                                     const StateRelation& rel, int x1, int x2, int u1, int u2,
                                                     int* failing_v1) {
    std::vector<int> response(static_cast<std::size_t>(m1.num_disturbances()), -1);
    for (int v1 = 0; v1 < m1.num_disturbances(); ++v1) {
        const auto& d1 = m1.next(x1, u1, v1);
        for (int v2 = 0; v2 < m2.num_disturbances(); ++v2)
            if (is_lifting(d1, m2.next(x2, u2, v2), rel)) {
                response[v1] = v2;
                break;
            }
        if (response[v1] < 0) {
            if (failing_v1 != nullptr) *failing_v1 = v1;
            return std::nullopt;
        }
    }
    return response;
}

PasrReport check_pasr(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel) {
    require_compatible(m1, m2, rel);
    PasrReport report;

    if (auto init = check_lifting(m1.init, m2.init, rel); auto* cert = std::get_if<LiftingInfeasible>(&init)) {
        report.holds = false;
        report.failed_condition = 1;
        report.certificate = *cert;
        return report;
    }

    for (auto [x1, x2] : rel.pairs()) {
        for (int u2 = 0; u2 < m2.num_actions(); ++u2) {
            std::vector<std::pair<int, int>> refutations;
            bool matched = false;
            for (int u1 = 0; u1 < m1.num_actions() && !matched; ++u1) {
                int bad_v1 = -1;
                if (disturbance_response(m1, m2, rel, x1, x2, u1, u2, &bad_v1))
                    matched = true;
                else
                    refutations.emplace_back(u1, bad_v1);
            }
            if (!matched) {
                report.holds = false;
                report.failed_condition = 2;
                report.x1 = x1;
                report.x2 = x2;
                report.u2 = u2;
                report.refutations = std::move(refutations);
                if (!report.refutations.empty()) report.v1 = report.refutations.front().second;
                return report;
            }
        }
    }

    for (auto [x1, x2] : rel.pairs())
        if (m1.labels[x1] != m2.labels[x2]) {
            report.holds = false;
            report.failed_condition = 3;
            report.x1 = x1;
            report.x2 = x2;
            return report;
        }
    return report;
}

PasrReport check_psr(const FiniteRMDP& d1, const FiniteRMDP& d2, const StateRelation& rel) {
    if (!d1.is_mdp() || !d2.is_mdp()) throw DomainError("probabilistic simulation needs singleton disturbance sets");
    return check_pasr(d1, d2, rel);
}

InterfaceTable compute_interface(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel) {
    auto report = check_pasr(m1, m2, rel);
    if (!report.holds) throw PasrPrecondition("interface requested for a relation that is not a PASR", report);

    InterfaceTable table(partners(rel), m2.num_actions());
    for (int x1 = 0; x1 < m1.num_states(); ++x1) {
        const int x2 = table.partner(x1);
        for (int u2 = 0; u2 < m2.num_actions(); ++u2) {
            auto& cell = table.cell(x1, u2);
            for (int u1 = 0; u1 < m1.num_actions(); ++u1)
                if (auto resp = disturbance_response(m1, m2, rel, x1, x2, u1, u2))
                    cell.push_back({u1, std::move(*resp)});
        }
    }
    return table;
}

MarkovPolicy refine_policy(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                           const InterfaceTable& iface, const MarkovPolicy& mu2) {
    if (!rel.single_valued()) throw DomainError("relation is not single-valued");
    if (iface.num_concrete_states() != m1.num_states() || iface.num_abstract_actions() != m2.num_actions())
        throw DomainError("interface table does not match the models");

    MarkovPolicy mu1;
    mu1.horizon = mu2.horizon;
    for (const auto& rows2 : mu2.steps) {
        if (static_cast<int>(rows2.size()) != m2.num_states())
            throw DomainError("abstract policy row count differs from the abstract state count");
        std::vector<FiniteDistribution> rows1(static_cast<std::size_t>(m1.num_states()));
        for (int x1 = 0; x1 < m1.num_states(); ++x1) {
            const int x2 = rel.partner(x1);
            std::vector<double> weight(static_cast<std::size_t>(m1.num_actions()), 0.0);
            const auto& row = rows2[x2];
            for (std::size_t i = 0; i < row.support.size(); ++i) {
                const auto& members = iface.at(x1, x2, row.support[i]);
                if (members.empty())
                    throw DomainError("empty interface cell at state " + m1.state_names[x1]);
                weight[members.front().u1] += row.probs[i];
            }
            auto& out = rows1[x1];
            for (int u1 = 0; u1 < m1.num_actions(); ++u1)
                if (weight[u1] > 0.0) {
                    out.support.push_back(u1);
                    out.probs.push_back(weight[u1]);
                }
        }
        mu1.steps.push_back(std::move(rows1));
    }
    return mu1;
}

std::vector<double> eval_min_adversary(const FiniteRMDP& m, const MarkovPolicy& mu, const ReachAvoidSpec& spec,
                                       int horizon) {
    if (horizon < 0) throw DomainError("negative horizon");
    if (horizon > 0 && !mu.covers(horizon - 1)) throw DomainError("policy horizon shorter than the requested horizon");
    const auto terminal = classify_states(m.labels, m.alphabet, spec);
    const int n = m.num_states();

    std::vector<double> value(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) value[x] = terminal[x] == Terminal::goal ? 1.0 : 0.0;

    std::vector<double> next(value.size());
    for (int k = horizon - 1; k >= 0; --k) {
        for (int x = 0; x < n; ++x) {
            if (terminal[x] != Terminal::none) {
                next[x] = value[x];
                continue;
            }
            const auto& row = mu.at(k, x);
            double worst = std::numeric_limits<double>::infinity();
            for (int v = 0; v < m.num_disturbances(); ++v) {
                double e = 0.0;
                for (std::size_t i = 0; i < row.support.size(); ++i) {
                    const auto& d = m.next(x, row.support[i], v);
                    double inner = 0.0;
                    for (std::size_t j = 0; j < d.support.size(); ++j) inner += d.probs[j] * value[d.support[j]];
                    e += row.probs[i] * inner;
                }
                worst = std::min(worst, e);
            }
            next[x] = worst;
        }
        std::swap(value, next);
    }
    return value;
}

RefinementCheck verify_refinement_theorem(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                                          const MarkovPolicy& mu2, const ReachAvoidSpec& spec, int horizon) {
    const auto iface = compute_interface(m1, m2, rel);
    RefinementCheck out;
    out.refined = refine_policy(m1, m2, rel, iface, mu2);
    const auto v1 = eval_min_adversary(m1, out.refined, spec, horizon);
    const auto v2 = eval_min_adversary(m2, mu2, spec, horizon);
    for (std::size_t i = 0; i < m1.init.size(); ++i) out.lhs += m1.init.probs[i] * v1[m1.init.support[i]];
    for (std::size_t i = 0; i < m2.init.size(); ++i) out.rhs += m2.init.probs[i] * v2[m2.init.support[i]];
    out.holds = out.lhs >= out.rhs - kProbTolerance;
    return out;
}

bool verify_label_lemma(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                        const InterfaceTable& iface) {
    constexpr double tol = 1e-12;
    for (auto [x1, x2] : rel.pairs())
        for (int u2 = 0; u2 < m2.num_actions(); ++u2)
            for (const auto& entry : iface.at(x1, x2, u2))
                for (int v1 = 0; v1 < m1.num_disturbances(); ++v1) {
                    const int v2 = entry.response.at(static_cast<std::size_t>(v1));
                    if (v2 < 0 || v2 >= m2.num_disturbances()) return false;
                    auto lhs = one_step_label_distribution(m1, x1, entry.u1, v1);
                    const auto rhs = one_step_label_distribution(m2, x2, u2, v2);
                    for (const auto& [labels, p] : rhs) lhs[labels] -= p;
                    for (const auto& [labels, diff] : lhs)
                        if (std::abs(diff) > tol) return false;
                }
    return true;
}

nlohmann::json report_to_json(const PasrReport& r, const FiniteRMDP& m1, const FiniteRMDP& m2) {
    nlohmann::json j;
    j["holds"] = r.holds;
    j["failed_condition"] = r.failed_condition == 0 ? nlohmann::json(nullptr) : nlohmann::json(r.failed_condition);
    if (r.x1 || r.x2) {
        nlohmann::json ce;
        if (r.x1) ce["x1"] = m1.state_names.at(*r.x1);
        if (r.x2) ce["x2"] = m2.state_names.at(*r.x2);
        if (r.u2) ce["u2"] = m2.action_names.at(*r.u2);
        if (r.v1) ce["v1"] = m1.disturbance_names.at(*r.v1);
        if (r.failed_condition == 3) {
            ce["labels1"] = nlohmann::json::array();
            ce["labels2"] = nlohmann::json::array();
            for (std::size_t l = 0; l < m1.alphabet.size(); ++l) {
                if (m1.labels[*r.x1].has(static_cast<int>(l))) ce["labels1"].push_back(m1.alphabet[l]);
                if (m2.labels[*r.x2].has(static_cast<int>(l))) ce["labels2"].push_back(m2.alphabet[l]);
            }
        }
        nlohmann::json refs = nlohmann::json::array();
        for (auto [u1, v1] : r.refutations)
            refs.push_back({{"u1", m1.action_names.at(u1)}, {"v1", m1.disturbance_names.at(v1)}});
        if (r.failed_condition == 2) ce["refutations"] = refs;
        j["counterexample"] = ce;
    }
    if (r.certificate) {
        auto cert = infeasible_to_json(*r.certificate);
        nlohmann::json names = nlohmann::json::array();
        for (int x : r.certificate->subset) names.push_back(m1.state_names.at(x));
        cert["subset"] = names;
        j["certificate"] = cert;
    }
    return j;
}

nlohmann::json interface_to_json(const InterfaceTable& t, const FiniteRMDP& m1, const FiniteRMDP& m2) {
    nlohmann::json out = nlohmann::json::array();
    for (int x1 = 0; x1 < t.num_concrete_states(); ++x1)
        for (int u2 = 0; u2 < t.num_abstract_actions(); ++u2) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& e : t.at(x1, u2)) {
                nlohmann::json resp = nlohmann::json::object();
                for (std::size_t v1 = 0; v1 < e.response.size(); ++v1)
                    resp[m1.disturbance_names[v1]] = m2.disturbance_names.at(e.response[v1]);
                members.push_back({{"u1", m1.action_names[e.u1]}, {"response", resp}});
            }
            out.push_back({{"x1", m1.state_names[x1]},
                           {"x2", m2.state_names[t.partner(x1)]},
                           {"u2", m2.action_names[u2]},
                           {"u1", members}});
        }
    return out;
}

}  // namespace rmdp
