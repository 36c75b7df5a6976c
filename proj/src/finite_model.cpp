#include "rmdp/finite_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace rmdp {

double FiniteDistribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double FiniteDistribution::prob(int id) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == id) return probs[i];
    return 0.0;
}

std::optional<std::string> distribution_problem(const FiniteDistribution& d, int n) {
    if (d.support.size() != d.probs.size()) return "support and probability lists differ in length";
    if (d.support.empty()) return "empty distribution";
    std::set<int> seen;
    for (std::size_t i = 0; i < d.support.size(); ++i) {
        const int id = d.support[i];
        if (id < 0 || id >= n) return "support id " + std::to_string(id) + " out of range";
        if (!seen.insert(id).second) return "duplicate support id " + std::to_string(id);
        if (!(d.probs[i] >= 0.0) || d.probs[i] > 1.0 + kProbTolerance)
            return "probability " + std::to_string(d.probs[i]) + " outside [0,1]";
    }
    const double s = d.total();
    if (std::abs(s - 1.0) > kProbTolerance) {
        std::ostringstream os;
        os << "row sums " << s << " != 1";
        return os.str();
    }
    return std::nullopt;
}

const FiniteDistribution& FiniteRMDP::next(int x, int u, int v) const {
    if (x < 0 || x >= num_states() || u < 0 || u >= num_actions() || v < 0 || v >= num_disturbances())
        throw DomainError("kernel lookup (" + std::to_string(x) + "," + std::to_string(u) + "," +
                          std::to_string(v) + ") outside the model");
    return kernel[kernel_index(x, u, v)];
}

void FiniteRMDP::resize_kernel() {
    kernel.assign(static_cast<std::size_t>(num_states()) * num_actions() * num_disturbances(), {});
}

int FiniteRMDP::label_index(const std::string& name) const {
    const auto it = std::find(alphabet.begin(), alphabet.end(), name);
    return it == alphabet.end() ? -1 : static_cast<int>(it - alphabet.begin());
}

ValidationReport validate_model(const FiniteRMDP& m) {
    ValidationReport r;
    const int n = m.num_states();
    if (n == 0) r.problems.emplace_back("model has no states");
    if (m.num_actions() == 0) r.problems.emplace_back("model has no actions");
    if (m.num_disturbances() == 0) r.problems.emplace_back("model has no disturbances");
    if (static_cast<int>(m.alphabet.size()) > kMaxLabels) r.problems.emplace_back("alphabet exceeds 64 labels");
    if (static_cast<int>(m.labels.size()) != n) r.problems.emplace_back("labeling does not cover every state");
    const std::uint64_t alphabet_mask =
        m.alphabet.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.alphabet.size()) - 1;
    for (std::size_t x = 0; x < m.labels.size(); ++x)
        if ((m.labels[x].bits() & ~alphabet_mask) != 0)
            r.problems.push_back("state " + std::to_string(x) + " carries labels outside the alphabet");
    if (auto p = distribution_problem(m.init, n)) r.problems.push_back("init: " + *p);

    const std::size_t expected = static_cast<std::size_t>(n) * m.num_actions() * m.num_disturbances();
    if (m.kernel.size() != expected) {
        r.problems.push_back("kernel has " + std::to_string(m.kernel.size()) + " entries, expected " +
                             std::to_string(expected));
        return r;
    }
    for (int x = 0; x < n; ++x)
        for (int u = 0; u < m.num_actions(); ++u)
            for (int v = 0; v < m.num_disturbances(); ++v) {
                const auto& d = m.kernel[m.kernel_index(x, u, v)];
                const std::string where = "kernel(" + m.state_names[x] + "," + m.action_names[u] + "," +
                                          m.disturbance_names[v] + ")";
                if (d.empty()) {
                    r.problems.push_back(where + ": missing entry");
                } else if (auto p = distribution_problem(d, n)) {
                    r.problems.push_back(where + ": " + *p);
                }
            }
    return r;
}

std::map<LabelSet, double> one_step_label_distribution(const FiniteRMDP& m, int x, int u, int v) {
    const auto& d = m.next(x, u, v);
    std::map<LabelSet, double> out;
    for (std::size_t i = 0; i < d.support.size(); ++i) out[m.labels.at(d.support[i])] += d.probs[i];
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<int> simulate_finite(const FiniteRMDP& m, const MarkovPolicy& mu, const MarkovAdversary& tau,
                                 int horizon, std::uint64_t seed) {
    if (horizon < 0) throw DomainError("negative horizon");
    if (horizon > 0 && (!mu.covers(horizon - 1) || !tau.covers(horizon - 1)))
        throw DomainError("policy or adversary horizon shorter than the requested horizon");
    std::mt19937_64 eng(seed);
    std::vector<int> path;
    path.reserve(static_cast<std::size_t>(horizon) + 1);
    int x = sample(m.init, eng);
    path.push_back(x);
    for (int k = 0; k < horizon; ++k) {
        const int u = sample(mu.at(k, x), eng);
        const int v = sample(tau.at(k, x), eng);
        x = sample(m.next(x, u, v), eng);
        path.push_back(x);
    }
    return path;
}

StateRelation::StateRelation(int n1, int n2, std::vector<std::pair<int, int>> pairs)
    : n1_(n1), n2_(n2), pairs_(std::move(pairs)), forward_(n1), inverse_(n2) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    for (auto [a, b] : pairs_) {
        if (a < 0 || a >= n1 || b < 0 || b >= n2)
            throw DomainError("relation pair (" + std::to_string(a) + "," + std::to_string(b) +
                              ") references unknown states");
        forward_[a].push_back(b);
        inverse_[b].push_back(a);
    }
}

StateRelation StateRelation::identity(int n) {
    std::vector<std::pair<int, int>> p;
    p.reserve(n);
    for (int i = 0; i < n; ++i) p.emplace_back(i, i);
    return {n, n, std::move(p)};
}

bool StateRelation::contains(int x1, int x2) const {
    if (x1 < 0 || x1 >= n1_) return false;
    const auto& img = forward_[x1];
    return std::binary_search(img.begin(), img.end(), x2);
}

bool StateRelation::single_valued() const {
    return std::all_of(forward_.begin(), forward_.end(), [](const auto& img) { return img.size() == 1; });
}

int StateRelation::partner(int x1) const {
    const auto& img = image(x1);
    if (img.size() != 1) throw DomainError("state " + std::to_string(x1) + " is not related to exactly one state");
    return img.front();
}

StateRelation StateRelation::inverse() const {
    std::vector<std::pair<int, int>> p;
    p.reserve(pairs_.size());
    for (auto [a, b] : pairs_) p.emplace_back(b, a);
    return {n2_, n1_, std::move(p)};
}

StateRelation StateRelation::compose(const StateRelation& other) const {
    if (n2_ != other.n1_) throw DomainError("relations are not composable");
    std::vector<std::pair<int, int>> p;
    for (auto [a, b] : pairs_)
        for (int c : other.image(b)) p.emplace_back(a, c);
    return {n1_, other.n2_, std::move(p)};
}

}  // namespace rmdp
