#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmdp {

/// Global tolerance for normalization checks on finite distributions.
inline constexpr double kProbTolerance = 1e-9;

/// Thrown when an operation receives ids or shapes outside its domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sparse distribution over a finite index set. Dirac distributions are
/// one-element supports; there is no special case.
struct FiniteDistribution {
    std::vector<int> support;
    std::vector<double> probs;

    static FiniteDistribution dirac(int id) { return {{id}, {1.0}}; }

    [[nodiscard]] std::size_t size() const { return support.size(); }
    [[nodiscard]] bool empty() const { return support.empty(); }
    [[nodiscard]] double total() const;
    /// Probability of `id` (0 when outside the support).
    [[nodiscard]] double prob(int id) const;

    bool operator==(const FiniteDistribution&) const = default;
};

/// Returns a human-readable reason when `d` violates the distribution
/// invariants (negative entries, duplicate support, bad normalization, ids
/// outside [0, n)), or nullopt when valid.
std::optional<std::string> distribution_problem(const FiniteDistribution& d, int n);

/// Bitmask over a model's label alphabet (at most 64 labels).
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::uint64_t bits) : bits_(bits) {}

    [[nodiscard]] bool has(int label) const { return label >= 0 && ((bits_ >> label) & 1u) != 0; }
    void insert(int label) { bits_ |= (std::uint64_t{1} << label); }
    void erase(int label) { bits_ &= ~(std::uint64_t{1} << label); }
    [[nodiscard]] std::uint64_t bits() const { return bits_; }
    [[nodiscard]] bool empty() const { return bits_ == 0; }

    auto operator<=>(const LabelSet&) const = default;

private:
    std::uint64_t bits_ = 0;
};

inline constexpr int kMaxLabels = 64;

/// Finite robust MDP: the successor distribution depends on the state, the
/// controller's action and nature's disturbance. An MDP is the case with a
/// single disturbance.
///
/// States, actions and disturbances are dense indices; the name vectors are a
/// sidecar for I/O. The kernel is stored densely, indexed by
/// (state * |U| + action) * |V| + disturbance. A missing entry is an empty
/// distribution and is reported by validate_model.
struct FiniteRMDP {
    std::vector<std::string> alphabet;
    std::vector<std::string> state_names;
    std::vector<LabelSet> labels;
    std::vector<std::string> action_names;
    std::vector<std::string> disturbance_names;
    FiniteDistribution init;
    std::vector<FiniteDistribution> kernel;

    [[nodiscard]] int num_states() const { return static_cast<int>(state_names.size()); }
    [[nodiscard]] int num_actions() const { return static_cast<int>(action_names.size()); }
    [[nodiscard]] int num_disturbances() const { return static_cast<int>(disturbance_names.size()); }
    [[nodiscard]] bool is_mdp() const { return num_disturbances() == 1; }

    [[nodiscard]] std::size_t kernel_index(int x, int u, int v) const {
        return (static_cast<std::size_t>(x) * num_actions() + u) * num_disturbances() + v;
    }
    /// Throws DomainError for unknown ids.
    [[nodiscard]] const FiniteDistribution& next(int x, int u, int v) const;
    FiniteDistribution& next_mut(int x, int u, int v) { return kernel[kernel_index(x, u, v)]; }

    /// Allocates an empty kernel of the right size for the current name vectors.
    void resize_kernel();

    /// Index of a label name, or -1.
    [[nodiscard]] int label_index(const std::string& name) const;
};

struct ValidationReport {
    std::vector<std::string> problems;
    [[nodiscard]] bool ok() const { return problems.empty(); }
};

ValidationReport validate_model(const FiniteRMDP& m);

/// Pushforward of kernel(x, u, v) through the labeling function.
std::map<LabelSet, double> one_step_label_distribution(const FiniteRMDP& m, int x, int u, int v);

/// Markov decision rule sequence mapping each state to a distribution over
/// choices (actions for policies, disturbances for adversaries). A rule with
/// no horizon is stationary and holds a single row set.
template <class Tag>
struct MarkovRule {
    std::optional<int> horizon;
    std::vector<std::vector<FiniteDistribution>> steps;

    static MarkovRule stationary(std::vector<FiniteDistribution> rows) {
        MarkovRule r;
        r.steps.push_back(std::move(rows));
        return r;
    }
    static MarkovRule deterministic(const std::vector<int>& choice) {
        std::vector<FiniteDistribution> rows;
        rows.reserve(choice.size());
        for (int c : choice) rows.push_back(FiniteDistribution::dirac(c));
        return stationary(std::move(rows));
    }

    [[nodiscard]] bool is_stationary() const { return !horizon.has_value(); }
    [[nodiscard]] bool covers(int k) const { return is_stationary() || k < *horizon; }

    /// Row used at time step k in state x.
    [[nodiscard]] const FiniteDistribution& at(int k, int x) const {
        if (!covers(k)) throw DomainError("decision rule horizon does not cover step " + std::to_string(k));
        const auto& rows = is_stationary() ? steps.front() : steps.at(static_cast<std::size_t>(k));
        return rows.at(static_cast<std::size_t>(x));
    }
};

struct PolicyTag {};
struct AdversaryTag {};
using MarkovPolicy = MarkovRule<PolicyTag>;
using MarkovAdversary = MarkovRule<AdversaryTag>;

/// Samples a path x_0 .. x_horizon with x_0 ~ init, u_k ~ mu_k(x_k),
/// v_k ~ tau_k(x_k). Deterministic for a given seed.
std::vector<int> simulate_finite(const FiniteRMDP& m, const MarkovPolicy& mu, const MarkovAdversary& tau,
                                 int horizon, std::uint64_t seed);

/// Binary relation between the state spaces of two models, with forward and
/// inverse index maps.
class StateRelation {
public:
    StateRelation(int n1, int n2, std::vector<std::pair<int, int>> pairs);

    static StateRelation identity(int n);

    [[nodiscard]] int size1() const { return n1_; }
    [[nodiscard]] int size2() const { return n2_; }
    [[nodiscard]] const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    [[nodiscard]] const std::vector<int>& image(int x1) const { return forward_.at(static_cast<std::size_t>(x1)); }
    [[nodiscard]] const std::vector<int>& preimage(int x2) const { return inverse_.at(static_cast<std::size_t>(x2)); }
    [[nodiscard]] bool contains(int x1, int x2) const;
    /// |R(x1)| = 1 for every x1.
    [[nodiscard]] bool single_valued() const;
    /// The unique related state; requires single_valued().
    [[nodiscard]] int partner(int x1) const;

    [[nodiscard]] StateRelation inverse() const;
    /// {(a, c) : (a, b) in this, (b, c) in other}.
    [[nodiscard]] StateRelation compose(const StateRelation& other) const;

private:
    int n1_;
    int n2_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::vector<int>> forward_;
    std::vector<std::vector<int>> inverse_;
};

/// splitmix64 finalizer; used to derive independent per-run seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) built from the top 53 bits of a 64-bit draw.
template <class Engine>
double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw from a finite distribution.
template <class Engine>
int sample(const FiniteDistribution& d, Engine& eng) {
    const double r = uniform01(eng);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.support.size(); ++i) {
        acc += d.probs[i];
        if (r < acc) return d.support[i];
    }
    // rounding left r above the accumulated mass: last positive entry
    for (std::size_t i = d.support.size(); i-- > 0;)
        if (d.probs[i] > 0.0) return d.support[i];
    throw DomainError("cannot sample from an empty distribution");
}

}  // namespace rmdp
