#include "generators.hpp"

#include <algorithm>
#include <numeric>

#include "rmdp/model_io.hpp"

#ifndef RMDP_DATA_DIR
#define RMDP_DATA_DIR "data"
#endif

namespace testing_support {

using namespace rmdp;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

namespace {

std::vector<int> random_subset(Rng& rng, int n, int k) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(static_cast<std::size_t>(std::min(k, n)));
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<double> random_weights(Rng& rng, std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) {
        x = uniform_real(rng, 0.05, 1.0);
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

std::vector<std::string> names(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

LabelSet random_label(Rng& rng) {
    LabelSet l;
    const double r = uniform_real(rng, 0.0, 1.0);
    if (r < 0.2)
        l.insert(0);
    else if (r < 0.4)
        l.insert(1);
    else if (r < 0.43) {
        l.insert(0);
        l.insert(1);
    }
    return l;
}

// Splits `mass` on block b among its member states.
void split_into(Rng& rng, const std::vector<int>& members, double mass, FiniteDistribution& out) {
    const auto w = random_weights(rng, members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        out.support.push_back(members[i]);
        out.probs.push_back(mass * w[i]);
    }
}

FiniteDistribution split_distribution(Rng& rng, const FiniteDistribution& abstract,
                                      const std::vector<std::vector<int>>& members) {
    FiniteDistribution d;
    for (std::size_t i = 0; i < abstract.size(); ++i)
        split_into(rng, members[static_cast<std::size_t>(abstract.support[i])], abstract.probs[i], d);
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d.support[a] < d.support[b]; });
    FiniteDistribution sorted;
    for (auto i : order) {
        sorted.support.push_back(d.support[i]);
        sorted.probs.push_back(d.probs[i]);
    }
    return sorted;
}

}  // namespace

FiniteDistribution random_dyadic_distribution(Rng& rng, int n, int max_support, int grain) {
    const int k = uniform_int(rng, 1, std::min({n, max_support, grain}));
    FiniteDistribution d;
    d.support = random_subset(rng, n, k);
    std::vector<int> cuts = random_subset(rng, grain - 1, k - 1);
    for (auto& c : cuts) c += 1;
    int prev = 0;
    for (int i = 0; i < k; ++i) {
        const int next = i + 1 < k ? cuts[static_cast<std::size_t>(i)] : grain;
        d.probs.push_back(static_cast<double>(next - prev) / grain);
        prev = next;
    }
    return d;
}

FiniteDistribution random_distribution(Rng& rng, int n, int max_support) {
    const int k = uniform_int(rng, 1, std::min(n, max_support));
    FiniteDistribution d;
    d.support = random_subset(rng, n, k);
    d.probs = random_weights(rng, d.support.size());
    return d;
}

StateRelation random_relation(Rng& rng, int n1, int n2, double density) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            if (uniform_real(rng, 0.0, 1.0) < density) pairs.emplace_back(a, b);
    return {n1, n2, pairs};
}

std::vector<IntervalEntry> random_interval_row(Rng& rng, int n, int max_successors) {
    const auto p = random_distribution(rng, n, max_successors);
    std::vector<IntervalEntry> row;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = p.probs[i];
        double lo = q * uniform_real(rng, 0.0, 1.0);
        double hi = q + (1.0 - q) * uniform_real(rng, 0.0, 1.0);
        const double r = uniform_real(rng, 0.0, 1.0);
        if (r < 0.15) lo = q;
        if (r > 0.85) hi = q;
        if (r > 0.4 && r < 0.55) lo = 0.0;
        row.push_back({p.support[i], lo, hi});
    }
    return row;
}

IntervalMDP random_imdp(Rng& rng, int max_states, int max_actions, int max_successors) {
    IntervalMDP m;
    m.alphabet = {"G", "U"};
    const int n = uniform_int(rng, 2, max_states);
    for (int s = 0; s < n; ++s) {
        m.add_state(random_label(rng));
        const int na = uniform_int(rng, 1, max_actions);
        for (int a = 0; a < na; ++a) m.add_row(random_interval_row(rng, n, max_successors));
    }
    m.initial = uniform_int(rng, 0, n - 1);
    return m;
}

FiniteRMDP random_rmdp(Rng& rng, int n, int nu, int nv, int max_support) {
    FiniteRMDP m;
    m.alphabet = {"G", "U"};
    m.state_names = names("s", n);
    m.action_names = names("a", nu);
    m.disturbance_names = names("d", nv);
    for (int x = 0; x < n; ++x) m.labels.push_back(random_label(rng));
    m.resize_kernel();
    for (auto& d : m.kernel) d = random_distribution(rng, n, max_support);
    m.init = random_distribution(rng, n, max_support);
    return m;
}

QuotientInstance refine_by_quotient(Rng& rng, const FiniteRMDP& m2, const QuotientLimits& limits) {
    QuotientInstance q;
    q.m2 = m2;
    const int n2 = m2.num_states();
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n2));
    std::vector<int> block_of;
    for (int b = 0; b < n2; ++b) {
        const int room = limits.max_states - static_cast<int>(block_of.size()) - (n2 - b - 1);
        const int size = uniform_int(rng, 1, std::max(1, std::min(2, room)));
        for (int i = 0; i < size; ++i) {
            members[b].push_back(static_cast<int>(block_of.size()));
            block_of.push_back(b);
        }
    }
    const int n1 = static_cast<int>(block_of.size());
    const int nu2 = m2.num_actions();
    const int nv2 = m2.num_disturbances();
    const int nu1 = uniform_int(rng, nu2, std::max(nu2, limits.max_actions));
    const int nv1 = uniform_int(rng, 1, limits.max_disturbances);

    auto& m1 = q.m1;
    m1.alphabet = m2.alphabet;
    m1.state_names = names("x", n1);
    m1.action_names = names("u1_", nu1);
    m1.disturbance_names = names("v1_", nv1);
    for (int x = 0; x < n1; ++x) m1.labels.push_back(m2.labels[block_of[x]]);
    m1.resize_kernel();
    for (int x = 0; x < n1; ++x) {
        std::vector<int> renaming(static_cast<std::size_t>(nu1));
        std::iota(renaming.begin(), renaming.end(), 0);
        std::shuffle(renaming.begin(), renaming.end(), rng);
        for (int u2 = 0; u2 < nu2; ++u2)
            for (int v1 = 0; v1 < nv1; ++v1) {
                const int v2 = uniform_int(rng, 0, nv2 - 1);
                m1.next_mut(x, renaming[u2], v1) = split_distribution(rng, m2.next(block_of[x], u2, v2), members);
            }
        for (int j = nu2; j < nu1; ++j)
            for (int v1 = 0; v1 < nv1; ++v1) m1.next_mut(x, renaming[j], v1) = random_distribution(rng, n1, 3);
    }
    m1.init = split_distribution(rng, m2.init, members);

    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n1; ++x) pairs.emplace_back(x, block_of[x]);
    q.rel = StateRelation(n1, n2, pairs);

    q.horizon = uniform_int(rng, 1, limits.max_horizon);
    q.mu2.horizon = q.horizon;
    for (int k = 0; k < q.horizon; ++k) {
        std::vector<FiniteDistribution> rows;
        for (int b = 0; b < n2; ++b) rows.push_back(FiniteDistribution::dirac(uniform_int(rng, 0, nu2 - 1)));
        q.mu2.steps.push_back(std::move(rows));
    }
    q.spec.goal = "G";
    q.spec.unsafe = "U";
    q.spec.horizon = q.horizon;
    return q;
}

QuotientInstance random_quotient_pasr(Rng& rng, const QuotientLimits& limits) {
    const int n2 = uniform_int(rng, 2, std::max(2, std::min(4, limits.max_states)));
    FiniteRMDP m2;
    m2.alphabet = {"G", "U"};
    m2.state_names = names("b", n2);
    m2.action_names = names("u2_", uniform_int(rng, 1, limits.max_actions));
    m2.disturbance_names = names("v2_", uniform_int(rng, 1, limits.max_disturbances));
    for (int b = 0; b < n2; ++b) m2.labels.push_back(random_label(rng));
    m2.resize_kernel();
    for (auto& d : m2.kernel) d = random_distribution(rng, n2, 3);
    m2.init = random_distribution(rng, n2, 3);
    return refine_by_quotient(rng, m2, limits);
}

std::string data_path(const std::string& name) { return std::string(RMDP_DATA_DIR) + "/" + name; }

FiniteRMDP load_bundled(const std::string& name) { return read_model(data_path(name)); }

}  // namespace testing_support
