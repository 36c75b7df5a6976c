#include "rmdp/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace rmdp {

namespace {

// Dinic max-flow on a small dense-ish network with real capacities.
class FlowNetwork {
public:
    explicit FlowNetwork(int n) : adj_(n), level_(n), iter_(n) {}

    int add_edge(int from, int to, double cap) {
        adj_[from].push_back({to, static_cast<int>(adj_[to].size()), cap, cap});
        adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0.0, 0.0});
        return static_cast<int>(adj_[from].size()) - 1;
    }

    double max_flow(int s, int t) {
        double flow = 0.0;
        while (bfs(s, t)) {
            std::fill(iter_.begin(), iter_.end(), 0);
            for (double f; (f = dfs(s, t, std::numeric_limits<double>::infinity())) > kEps;) flow += f;
        }
        return flow;
    }

    /// Nodes reachable from s through edges with positive residual.
    std::vector<bool> reachable(int s) const {
        std::vector<bool> seen(adj_.size(), false);
        std::queue<int> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (const auto& e : adj_[v])
                if (e.residual > kEps && !seen[e.to]) {
                    seen[e.to] = true;
                    q.push(e.to);
                }
        }
        return seen;
    }

    [[nodiscard]] double flow_on(int from, int edge) const {
        const auto& e = adj_[from][edge];
        return e.capacity - e.residual;
    }

private:
    static constexpr double kEps = 1e-15;

    struct Edge {
        int to;
        int rev;
        double residual;
        double capacity;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (const auto& e : adj_[v])
                if (e.residual > kEps && level_[e.to] < 0) {
                    level_[e.to] = level_[v] + 1;
                    q.push(e.to);
                }
        }
        return level_[t] >= 0;
    }

    double dfs(int v, int t, double f) {
        if (v == t) return f;
        for (int& i = iter_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
            auto& e = adj_[v][i];
            if (e.residual > kEps && level_[v] < level_[e.to]) {
                const double d = dfs(e.to, t, std::min(f, e.residual));
                if (d > kEps) {
                    e.residual -= d;
                    adj_[e.to][e.rev].residual += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    std::vector<std::vector<Edge>> adj_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

void check_ground_set(const FiniteDistribution& d, int n, const char* which) {
    if (d.support.size() != d.probs.size())
        throw DomainError(std::string(which) + ": support and probability lists differ in length");
    for (int id : d.support)
        if (id < 0 || id >= n)
            throw DomainError(std::string(which) + " references state " + std::to_string(id) +
                              " unknown to the relation");
}

}  // namespace

LiftingResult check_lifting(const FiniteDistribution& delta, const FiniteDistribution& theta,
                            const StateRelation& rel) {
    check_ground_set(delta, rel.size1(), "delta");
    check_ground_set(theta, rel.size2(), "theta");

    const int n1 = static_cast<int>(delta.size());
    const int n2 = static_cast<int>(theta.size());
    const int source = 0;
    const int sink = n1 + n2 + 1;
    FlowNetwork net(n1 + n2 + 2);
    struct Mid {
        int i, j, edge;
    };
    std::vector<Mid> mids;
    for (int i = 0; i < n1; ++i) net.add_edge(source, 1 + i, delta.probs[i]);
    for (int j = 0; j < n2; ++j) net.add_edge(1 + n1 + j, sink, theta.probs[j]);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (rel.contains(delta.support[i], theta.support[j]))
                mids.push_back({i, j, net.add_edge(1 + i, 1 + n1 + j, 2.0)});

    const double flow = net.max_flow(source, sink);
    if (flow >= 1.0 - kProbTolerance) {
        Coupling w;
        for (const auto& m : mids) {
            const double f = net.flow_on(1 + m.i, m.edge);
            if (f > 0.0) w.entries.push_back({delta.support[m.i], theta.support[m.j], f});
        }
        return w;
    }

    const auto seen = net.reachable(source);
    LiftingInfeasible cert;
    cert.flow_value = flow;
    for (int i = 0; i < n1; ++i)
        if (seen[1 + i]) {
            cert.subset.push_back(delta.support[i]);
            cert.subset_mass += delta.probs[i];
        }
    for (int j = 0; j < n2; ++j) {
        const bool in_image = std::any_of(cert.subset.begin(), cert.subset.end(),
                                          [&](int x1) { return rel.contains(x1, theta.support[j]); });
        if (in_image) cert.image_mass += theta.probs[j];
    }
    std::sort(cert.subset.begin(), cert.subset.end());
    return cert;
}

bool is_lifting(const FiniteDistribution& delta, const FiniteDistribution& theta, const StateRelation& rel) {
    return std::holds_alternative<Coupling>(check_lifting(delta, theta, rel));
}

bool verify_coupling(const Coupling& w, const FiniteDistribution& delta, const FiniteDistribution& theta,
                     const StateRelation& rel, double tol) {
    std::vector<double> row(static_cast<std::size_t>(rel.size1()), 0.0);
    std::vector<double> col(static_cast<std::size_t>(rel.size2()), 0.0);
    for (const auto& e : w.entries) {
        if (e.x1 < 0 || e.x1 >= rel.size1() || e.x2 < 0 || e.x2 >= rel.size2()) return false;
        if (e.weight < 0.0) return false;
        if (e.weight > 0.0 && !rel.contains(e.x1, e.x2)) return false;
        row[e.x1] += e.weight;
        col[e.x2] += e.weight;
    }
    for (int x = 0; x < rel.size1(); ++x)
        if (std::abs(row[x] - delta.prob(x)) > tol) return false;
    for (int x = 0; x < rel.size2(); ++x)
        if (std::abs(col[x] - theta.prob(x)) > tol) return false;
    return true;
}

nlohmann::json coupling_to_json(const Coupling& w) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : w.entries) out.push_back({e.x1, e.x2, e.weight});
    return out;
}

nlohmann::json infeasible_to_json(const LiftingInfeasible& c) {
    return {{"subset", c.subset},
            {"subset_mass", c.subset_mass},
            {"image_mass", c.image_mass},
            {"flow_value", c.flow_value}};
}

}  // namespace rmdp
