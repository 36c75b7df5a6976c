#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmdp/coupling.hpp"
#include "rmdp/finite_model.hpp"
#include "rmdp/reach_avoid.hpp"

namespace rmdp {

/// Verdict of a probabilistic alternating simulation check from m2 to m1.
///
/// On failure, `failed_condition` is 1 (initial distributions not related),
/// 2 (an abstract action the concrete side cannot match) or 3 (a related pair
/// with different labels). The counterexample is the lexicographically
/// smallest failing (x1, x2, u2). For condition 2, `refutations` lists for
/// every concrete action u1 the first disturbance v1 no v2 can answer.
struct PasrReport {
    bool holds = true;
    int failed_condition = 0;
    std::optional<int> x1, x2, u2, v1;
    std::vector<std::pair<int, int>> refutations;  ///< (u1, v1)
    std::optional<LiftingInfeasible> certificate;
};

struct InterfaceEntry {
    int u1 = 0;
    std::vector<int> response;  ///< response[v1] = lowest v2 giving a lifting
};

/// Set-valued interface map (x1, x2, u2) -> {u1}, stored densely over
/// x1 x U2 since the relation is single-valued (x2 = R(x1)).
class InterfaceTable {
public:
    InterfaceTable(std::vector<int> partner, int num_abstract_actions)
        : partner_(std::move(partner)), nu2_(num_abstract_actions), cells_(partner_.size() * nu2_) {}

    [[nodiscard]] int num_concrete_states() const { return static_cast<int>(partner_.size()); }
    [[nodiscard]] int num_abstract_actions() const { return nu2_; }
    [[nodiscard]] int partner(int x1) const { return partner_.at(static_cast<std::size_t>(x1)); }

    /// Entries sorted by ascending u1.
    [[nodiscard]] const std::vector<InterfaceEntry>& at(int x1, int u2) const { return cells_.at(slot(x1, u2)); }
    /// Throws DomainError when (x1, x2) is not in the relation.
    [[nodiscard]] const std::vector<InterfaceEntry>& at(int x1, int x2, int u2) const;
    std::vector<InterfaceEntry>& cell(int x1, int u2) { return cells_.at(slot(x1, u2)); }

private:
    [[nodiscard]] std::size_t slot(int x1, int u2) const {
        return static_cast<std::size_t>(x1) * static_cast<std::size_t>(nu2_) + static_cast<std::size_t>(u2);
    }
    std::vector<int> partner_;
    int nu2_;
    std::vector<std::vector<InterfaceEntry>> cells_;
};

/// Raised when an operation that requires a PASR is called on inputs that do
/// not form one.
class PasrPrecondition : public std::logic_error {
public:
    PasrPrecondition(const std::string& what, PasrReport report)
        : std::logic_error(what), report_(std::move(report)) {}
    [[nodiscard]] const PasrReport& report() const { return report_; }

private:
    PasrReport report_;
};

/// Evaluates the forall-v1 exists-v2 lifting predicate for one (x1, x2, u1, u2).
/// Returns the disturbance response on success, or nullopt and stores the
/// first unanswerable v1 in `failing_v1`.
std::optional<std::vector<int>> disturbance_response(const FiniteRMDP& m1, const FiniteRMDP& m2,
                                                     const StateRelation& rel, int x1, int x2, int u1, int u2,
                                                     int* failing_v1 = nullptr);

PasrReport check_pasr(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel);

/// Probabilistic simulation between two MDPs (singleton disturbance sets).
PasrReport check_psr(const FiniteRMDP& d1, const FiniteRMDP& d2, const StateRelation& rel);

InterfaceTable compute_interface(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel);

/// Refines a policy for m2 into one for m1 through the interface; stochastic
/// rows are refined action by action with weights preserved, choosing the
/// lowest-index interface member.
MarkovPolicy refine_policy(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                           const InterfaceTable& iface, const MarkovPolicy& mu2);

/// Per-state min over Markov adversaries of the probability of satisfying
/// the reach-avoid objective within `horizon` steps under the fixed policy.
std::vector<double> eval_min_adversary(const FiniteRMDP& m, const MarkovPolicy& mu, const ReachAvoidSpec& spec,
                                       int horizon);

struct RefinementCheck {
    double lhs = 0.0;  ///< concrete side, refined policy
    double rhs = 0.0;  ///< abstract side, original policy
    bool holds = false;
    MarkovPolicy refined;
};

RefinementCheck verify_refinement_theorem(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                                          const MarkovPolicy& mu2, const ReachAvoidSpec& spec, int horizon);

/// One-step label distributions agree (1e-12) for every related pair, abstract
/// action, interface member and v1 under the recorded v2 response.
bool verify_label_lemma(const FiniteRMDP& m1, const FiniteRMDP& m2, const StateRelation& rel,
                        const InterfaceTable& iface);

nlohmann::json report_to_json(const PasrReport& r, const FiniteRMDP& m1, const FiniteRMDP& m2);
nlohmann::json interface_to_json(const InterfaceTable& t, const FiniteRMDP& m1, const FiniteRMDP& m2);

}  // namespace rmdp
