#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include <boost/math/distributions/normal.hpp>

namespace testing_support {

using namespace rmdp;

bool hall_lifting_oracle(const FiniteDistribution& delta, const FiniteDistribution& theta, const StateRelation& rel,
                         double tol) {
    const std::size_t k = delta.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
        double lhs = 0.0;
        std::vector<char> image(static_cast<std::size_t>(rel.size2()), 0);
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) {
                lhs += delta.probs[i];
                for (int x2 : rel.image(delta.support[i])) image[static_cast<std::size_t>(x2)] = 1;
            }
        double rhs = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j)
            if (image[static_cast<std::size_t>(theta.support[j])]) rhs += theta.probs[j];
        if (lhs > rhs + tol) return false;
    }
    return true;
}

double vertex_enumeration_min(std::span<const double> values, std::span<const IntervalEntry> row) {
    const std::size_t k = row.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t free = 0; free < k; ++free) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            if ((mask >> free) & 1u) continue;
            double mass = 0.0;
            double obj = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == free) continue;
                const double p = ((mask >> i) & 1u) ? row[i].hi : row[i].lo;
                mass += p;
                obj += p * values[static_cast<std::size_t>(row[i].succ)];
            }
            const double pf = 1.0 - mass;
            if (pf < row[free].lo - 1e-12 || pf > row[free].hi + 1e-12) continue;
            obj += pf * values[static_cast<std::size_t>(row[free].succ)];
            best = std::min(best, obj);
        }
    }
    return best;
}

namespace {

std::vector<int> terminal_of(const IntervalMDP& m) {
    // 0 none, 1 goal, 2 unsafe
    std::vector<int> t(static_cast<std::size_t>(m.num_states()), 0);
    for (int s = 0; s < m.num_states(); ++s) {
        if (m.labels[s].has(1))
            t[s] = 2;
        else if (m.labels[s].has(0))
            t[s] = 1;
    }
    return t;
}

std::vector<double> imdp_iterate(const IntervalMDP& m, int horizon, const std::vector<int>* actions) {
    const auto term = terminal_of(m);
    std::vector<double> v(term.size());
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = term[s] == 1 ? 1.0 : 0.0;
    for (int k = 0; k < horizon; ++k) {
        std::vector<double> next = v;
        for (int s = 0; s < m.num_states(); ++s) {
            if (term[s] != 0) continue;
            double best = -1.0;
            for (int a = 0; a < m.num_actions(s); ++a) {
                if (actions != nullptr && (*actions)[s] != a) continue;
                best = std::max(best, vertex_enumeration_min(v, m.row(s, a)));
            }
            next[s] = best;
        }
        v = std::move(next);
    }
    return v;
}

}  // namespace

std::vector<double> imdp_value_oracle(const IntervalMDP& m, int horizon) { return imdp_iterate(m, horizon, nullptr); }

std::vector<double> imdp_policy_value_oracle(const IntervalMDP& m, const std::vector<int>& actions, int horizon) {
    return imdp_iterate(m, horizon, &actions);
}

std::vector<double> finite_min_adversary_oracle(const FiniteRMDP& m, const MarkovPolicy& mu, int horizon) {
    const int goal = m.label_index("G");
    const int unsafe = m.label_index("U");
    std::map<std::pair<int, int>, double> memo;
    std::function<double(int, int)> value = [&](int k, int x) -> double {
        if (m.labels[x].has(unsafe)) return 0.0;
        if (m.labels[x].has(goal)) return 1.0;
        if (k == horizon) return 0.0;
        if (auto it = memo.find({k, x}); it != memo.end()) return it->second;
        double worst = 2.0;
        for (int v = 0; v < m.num_disturbances(); ++v) {
            double e = 0.0;
            const auto& row = mu.at(k, x);
            for (std::size_t i = 0; i < row.size(); ++i) {
                const auto& d = m.next(x, row.support[i], v);
                for (std::size_t j = 0; j < d.size(); ++j) e += row.probs[i] * d.probs[j] * value(k + 1, d.support[j]);
            }
            worst = std::min(worst, e);
        }
        memo[{k, x}] = worst;
        return worst;
    };
    std::vector<double> out(static_cast<std::size_t>(m.num_states()));
    for (int x = 0; x < m.num_states(); ++x) out[x] = value(0, x);
    return out;
}

double normal_mass(double l, double u, double m, double sigma) {
    const boost::math::normal_distribution<double> n(m, sigma);
    if (l > m) return boost::math::cdf(boost::math::complement(n, l)) - boost::math::cdf(boost::math::complement(n, u));
    return boost::math::cdf(n, u) - boost::math::cdf(n, l);
}

std::vector<double> exact_cell_distribution(const ParametricSystem& sys, const GridPartition& grid,
                                            const Eigen::VectorXd& s, const Eigen::VectorXd& u,
                                            const Eigen::VectorXd& p) {
    const Eigen::VectorXd mean = sys.mean(s, u, p);
    const Eigen::VectorXd sigma = sys.noise_std();
    const int n = grid.dim();
    std::vector<std::vector<double>> per_dim(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const int cells = grid.cells_per_dim()[d];
        auto& probs = per_dim[d];
        probs.assign(static_cast<std::size_t>(cells), 0.0);
        if (sigma[d] == 0.0) {
            const int i = grid.index_along(d, mean[d]);
            if (i >= 0) probs[i] = 1.0;
            continue;
        }
        for (int i = 0; i < cells; ++i) {
            const double a = grid.boundary(d, i);
            const double b = grid.boundary(d, i + 1);
            if (grid.periodic(d)) {
                const double period = grid.periods()[d];
                for (int k = -4; k <= 4; ++k) probs[i] += normal_mass(a + k * period, b + k * period, mean[d], sigma[d]);
            } else {
                probs[i] = normal_mass(a, b, mean[d], sigma[d]);
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(grid.num_cells()) + 1, 0.0);
    double inside = 0.0;
    for (int c = 0; c < grid.num_cells(); ++c) {
        const auto idx = grid.indices(c);
        double q = 1.0;
        for (int d = 0; d < n && q > 0.0; ++d) q *= per_dim[d][idx[d]];
        out[c] = q;
        inside += q;
    }
    out.back() = std::max(0.0, 1.0 - inside);
    return out;
}

ContainmentResult check_row_containment(const ParametricSystem& sys, const GridPartition& grid, const Box& params,
                                        int cell, const Eigen::VectorXd& u, std::span<const IntervalEntry> row,
                                        int samples, std::uint64_t seed, double tol) {
    ContainmentResult res;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Box box = grid.cell_box(cell);
    std::vector<double> lo(static_cast<std::size_t>(grid.num_cells()) + 1, 0.0);
    std::vector<double> hi(lo.size(), 0.0);
    for (const auto& e : row) {
        lo[e.succ] = e.lo;
        hi[e.succ] = e.hi;
    }
    const auto sink = static_cast<std::size_t>(grid.sink());
    for (int t = 0; t < samples; ++t) {
        Eigen::VectorXd s(box.dim()), p(params.dim());
        for (Eigen::Index d = 0; d < box.dim(); ++d) s[d] = box.lo[d] + unit(rng) * (box.hi[d] - box.lo[d]);
        for (Eigen::Index d = 0; d < params.dim(); ++d) p[d] = params.lo[d] + unit(rng) * (params.hi[d] - params.lo[d]);
        const auto exact = exact_cell_distribution(sys, grid, s, u, p);
        double lumped = exact[sink];
        ++res.samples;
        for (std::size_t c = 0; c < sink; ++c) {
            const bool listed = hi[c] > 0.0;
            if (!listed) {
                lumped += exact[c];
                continue;
            }
            const double excess = std::max(lo[c] - exact[c], exact[c] - hi[c]);
            if (excess > tol) {
                ++res.violations;
                res.worst_excess = std::max(res.worst_excess, excess);
            }
        }
        const double excess = std::max(lo[sink] - lumped, lumped - hi[sink]);
        if (excess > tol) {
            ++res.violations;
            res.worst_excess = std::max(res.worst_excess, excess);
        }
    }
    return res;
}

}  // namespace testing_support
