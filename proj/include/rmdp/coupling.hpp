#pragma once

#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmdp/finite_model.hpp"

namespace rmdp {

/// Joint distribution over X1 x X2 witnessing that two distributions are
/// related by the lifting of a state relation.
struct Coupling {
    struct Entry {
        int x1;
        int x2;
        double weight;
    };
    std::vector<Entry> entries;
};

/// Cut certificate for an infeasible lifting: a subset S of support(delta)
/// whose mass exceeds the mass theta assigns to its relational image.
struct LiftingInfeasible {
    std::vector<int> subset;
    double subset_mass = 0.0;  ///< delta(S)
    double image_mass = 0.0;   ///< theta(R(S))
    double flow_value = 0.0;
};

using LiftingResult = std::variant<Coupling, LiftingInfeasible>;

/// Decides whether (delta, theta) lies in the lifting of `rel` by max-flow on
/// the bipartite transport network; returns a witness coupling or a violated
/// Hall-type cut.
LiftingResult check_lifting(const FiniteDistribution& delta, const FiniteDistribution& theta,
                            const StateRelation& rel);

/// Convenience predicate; same decision as check_lifting.
bool is_lifting(const FiniteDistribution& delta, const FiniteDistribution& theta, const StateRelation& rel);

/// Checks the three coupling conditions (marginals and support on the
/// relation) at tolerance `tol`.
bool verify_coupling(const Coupling& w, const FiniteDistribution& delta, const FiniteDistribution& theta,
                     const StateRelation& rel, double tol = kProbTolerance);

nlohmann::json coupling_to_json(const Coupling& w);
nlohmann::json infeasible_to_json(const LiftingInfeasible& c);

}  // namespace rmdp
