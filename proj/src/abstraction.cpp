#include "rmdp/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmdp/parallel.hpp"

namespace rmdp {

namespace {

constexpr double kMassSlack = 1e-14;
// Beyond this many sigma the Gaussian tail underflows double precision.
constexpr double kNegligibleSigmas = 40.0;

// Upper Gaussian tail P(Z > z).
double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

struct DimTarget {
    int index;
    double lo;
    double hi;
};

struct DimResult {
    std::vector<DimTarget> targets;
    double in_lo = 1.0;  // bounds on P(component stays inside the domain)
    double in_hi = 1.0;
    double pruned = 0.0;  // sink slack for in-domain cells that may be skipped
};

DimResult noiseless_line(const GridPartition& g, int d, Interval r) {
    DimResult out;
    const int n = g.cells_per_dim()[d];
    const double dlo = g.boundary(d, 0);
    const double dhi = g.boundary(d, n);
    out.in_lo = (r.lo >= dlo && r.hi <= dhi) ? 1.0 : 0.0;
    out.in_hi = (r.hi >= dlo && r.lo <= dhi) ? 1.0 : 0.0;
    if (out.in_hi == 0.0) return out;
    const int first = g.index_along(d, std::max(r.lo, dlo));
    const int last = g.index_along(d, std::min(r.hi, dhi));
    for (int i = first; i <= last; ++i) {
        const bool upper_ok = (i == n - 1) ? r.hi <= g.boundary(d, i + 1) : r.hi < g.boundary(d, i + 1);
        const bool inside = r.lo >= g.boundary(d, i) && upper_ok;
        out.targets.push_back({i, inside ? 1.0 : 0.0, 1.0});
    }
    return out;
}

DimResult noiseless_periodic(const GridPartition& g, int d, Interval r) {
    DimResult out;
    const int n = g.cells_per_dim()[d];
    const double period = g.periods()[d];
    if (r.width() >= period) {
        for (int i = 0; i < n; ++i) out.targets.push_back({i, 0.0, 1.0});
        return out;
    }
    // walk the shifted copies of the grid that intersect r
    const double base = g.boundary(d, 0);
    const auto kmin = static_cast<long>(std::floor((r.lo - base) / period));
    const auto kmax = static_cast<long>(std::floor((r.hi - base) / period));
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    int cells_hit = 0;
    for (long k = kmin; k <= kmax; ++k)
        for (int i = 0; i < n; ++i) {
            const double a = g.boundary(d, i) + k * period;
            const double b = g.boundary(d, i + 1) + k * period;
            if (r.hi >= a && r.lo <= b && !hit[i]) {
                hit[i] = 1;
                ++cells_hit;
            }
        }
    for (int i = 0; i < n; ++i)
        if (hit[i]) out.targets.push_back({i, 0.0, 1.0});
    if (cells_hit == 1 && kmin == kmax) {
        const int i = out.targets.front().index;
        const double a = g.boundary(d, i) + kmin * period;
        const double b = g.boundary(d, i + 1) + kmin * period;
        if (r.lo >= a && r.hi < b) out.targets.front().lo = 1.0;
    }
    return out;
}

DimResult noisy_line(const GridPartition& g, int d, Interval r, double sigma, double k) {
    DimResult out;
    const int n = g.cells_per_dim()[d];
    const double dlo = g.boundary(d, 0);
    const double dhi = g.boundary(d, n);
    const Interval in = gaussian_mass_bounds({dlo, dhi}, r, sigma);
    out.in_lo = in.lo;
    out.in_hi = in.hi;
    const double wlo = r.lo - k * sigma;
    const double whi = r.hi + k * sigma;
    // reserved even when no cell is skipped
    out.pruned = 2.0 * upper_tail(k);
    if (whi < dlo || wlo > dhi) return out;
    const int first = wlo <= dlo ? 0 : g.index_along(d, wlo);
    const int last = whi >= dhi ? n - 1 : g.index_along(d, whi);
    for (int i = first; i <= last; ++i) {
        const Interval m = gaussian_mass_bounds({g.boundary(d, i), g.boundary(d, i + 1)}, r, sigma);
        if (m.hi > 0.0) out.targets.push_back({i, m.lo, m.hi});
    }
    return out;
}

DimResult noisy_periodic(const GridPartition& g, int d, Interval r, double sigma, double k) {
    DimResult out;
    const int n = g.cells_per_dim()[d];
    const double period = g.periods()[d];
    const double base = g.boundary(d, 0);
    const double wlo = r.lo - k * sigma;
    const double whi = r.hi + k * sigma;
    const auto kmin = static_cast<long>(std::floor((r.lo - kNegligibleSigmas * sigma - base) / period));
    const auto kmax = static_cast<long>(std::floor((r.hi + kNegligibleSigmas * sigma - base) / period));
    out.pruned = 2.0 * upper_tail(k);
    for (int i = 0; i < n; ++i) {
        double lo = 0.0;
        double hi = 0.0;
        bool in_window = false;
        for (long s = kmin; s <= kmax; ++s) {
            const Interval cell{g.boundary(d, i) + s * period, g.boundary(d, i + 1) + s * period};
            if (cell.hi >= wlo && cell.lo <= whi) in_window = true;
            const Interval m = gaussian_mass_bounds(cell, r, sigma);
            lo += m.lo;
            hi += m.hi;
        }
        if (!in_window) continue;
        hi = std::min(hi, 1.0);
        lo = std::min(lo, hi);
        if (hi > 0.0) out.targets.push_back({i, lo, hi});
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridPartition

GridPartition::GridPartition(Box domain, std::vector<int> cells, Eigen::VectorXd periods)
    : domain_(std::move(domain)), cells_(std::move(cells)), periods_(std::move(periods)) {
    if (static_cast<Eigen::Index>(cells_.size()) != domain_.dim() || periods_.size() != domain_.dim())
        throw DomainError("grid dimension mismatch between domain, cell counts and periods");
    std::int64_t total = 1;
    strides_.resize(cells_.size());
    for (std::size_t d = 0; d < cells_.size(); ++d) {
        if (cells_[d] < 1) throw DomainError("cells per dimension must be at least 1");
        if (!(domain_.hi[d] > domain_.lo[d])) throw DomainError("grid domain has non-positive width");
        if (periods_[d] > 0.0 && std::abs(domain_.hi[d] - domain_.lo[d] - periods_[d]) > 1e-9)
            throw DomainError("periodic dimension " + std::to_string(d) + " must span exactly one period");
        strides_[d] = static_cast<int>(total);
        total *= cells_[d];
        if (total >= std::numeric_limits<int>::max()) throw DomainError("grid has too many cells");
    }
    total_ = static_cast<int>(total);
}

Eigen::VectorXd GridPartition::widths() const {
    Eigen::VectorXd w(dim());
    for (int d = 0; d < dim(); ++d) w[d] = (domain_.hi[d] - domain_.lo[d]) / cells_[d];
    return w;
}

double GridPartition::boundary(int d, int i) const {
    const int n = cells_[d];
    if (i >= n) return domain_.hi[d];
    return domain_.lo[d] + (domain_.hi[d] - domain_.lo[d]) * i / n;
}

int GridPartition::index_along(int d, double v) const {
    const double lo = domain_.lo[d];
    const double hi = domain_.hi[d];
    if (periodic(d)) {
        v = lo + (v - lo) - periods_[d] * std::floor((v - lo) / periods_[d]);
        if (v >= hi) v = lo;
    } else if (!(v >= lo && v <= hi)) {
        return -1;
    }
    const int n = cells_[d];
    int i = static_cast<int>(std::floor((v - lo) * n / (hi - lo)));
    i = std::clamp(i, 0, n - 1);
    while (i > 0 && v < boundary(d, i)) --i;
    while (i < n - 1 && v >= boundary(d, i + 1)) ++i;
    return i;
}

int GridPartition::cell_of(const Eigen::VectorXd& s) const {
    if (s.size() != dim()) throw DomainError("state dimension differs from the grid");
    int id = 0;
    for (int d = 0; d < dim(); ++d) {
        const int i = index_along(d, s[d]);
        if (i < 0) return sink();
        id += i * strides_[d];
    }
    return id;
}

std::vector<int> GridPartition::indices(int cell) const {
    if (cell < 0 || cell >= total_) throw DomainError("cell id out of range");
    std::vector<int> idx(cells_.size());
    for (std::size_t d = 0; d < cells_.size(); ++d) {
        idx[d] = cell % cells_[d];
        cell /= cells_[d];
    }
    return idx;
}

int GridPartition::flat(const std::vector<int>& idx) const {
    int id = 0;
    for (std::size_t d = 0; d < cells_.size(); ++d) id += idx[d] * strides_[d];
    return id;
}

Box GridPartition::cell_box(int cell) const {
    const auto idx = indices(cell);
    Eigen::VectorXd lo(dim()), hi(dim());
    for (int d = 0; d < dim(); ++d) {
        lo[d] = boundary(d, idx[d]);
        hi[d] = boundary(d, idx[d] + 1);
    }
    return {lo, hi};
}

ActionGrid::ActionGrid(Box b, std::vector<int> c) : bounds(std::move(b)), counts(std::move(c)) {
    if (static_cast<Eigen::Index>(counts.size()) != bounds.dim()) throw DomainError("action grid dimension mismatch");
    std::size_t total = 1;
    for (int n : counts) {
        if (n < 1) throw DomainError("action grid counts must be at least 1");
        total *= static_cast<std::size_t>(n);
    }
    inputs.reserve(total);
    std::vector<int> idx(counts.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        Eigen::VectorXd u(bounds.dim());
        for (std::size_t d = 0; d < counts.size(); ++d) {
            const auto e = static_cast<Eigen::Index>(d);
            u[e] = counts[d] == 1 ? 0.5 * (bounds.lo[e] + bounds.hi[e])
                                  : bounds.lo[e] + (bounds.hi[e] - bounds.lo[e]) * idx[d] / (counts[d] - 1);
        }
        inputs.push_back(std::move(u));
        for (std::size_t d = 0; d < counts.size(); ++d) {
            if (++idx[d] < counts[d]) break;
            idx[d] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Gaussian masses

double gaussian_mass(Interval target, double m, double sigma) {
    const double zl = (target.lo - m) / sigma;
    const double zu = (target.hi - m) / sigma;
    double p;
    if (zl >= 0.0)
        p = upper_tail(zl) - upper_tail(zu);
    else if (zu <= 0.0)
        p = upper_tail(-zu) - upper_tail(-zl);
    else
        p = 1.0 - upper_tail(zu) - upper_tail(-zl);
    return std::clamp(p, 0.0, 1.0);
}

Interval gaussian_mass_bounds(Interval target, Interval mean, double sigma) {
    if (!(target.lo <= target.hi) || !(mean.lo <= mean.hi) || !(sigma > 0.0))
        throw DomainError("gaussian_mass_bounds needs l <= u, m_lo <= m_hi and sigma > 0");
    if (std::isinf(target.lo) && std::isinf(target.hi)) return {1.0, 1.0};
    // the mass is unimodal in m and peaks at the target midpoint
    double mid;
    if (std::isinf(target.lo))
        mid = -std::numeric_limits<double>::infinity();
    else if (std::isinf(target.hi))
        mid = std::numeric_limits<double>::infinity();
    else
        mid = 0.5 * (target.lo + target.hi);
    const double peak = std::clamp(mid, mean.lo, mean.hi);
    const double hi = gaussian_mass(target, peak, sigma);
    const double lo = std::min(gaussian_mass(target, mean.lo, sigma), gaussian_mass(target, mean.hi, sigma));
    return {std::max(0.0, lo - kMassSlack), std::min(1.0, hi + kMassSlack)};
}

// ---------------------------------------------------------------------------
// Rows

std::vector<IntervalEntry> transition_intervals(int cell, const Eigen::VectorXd& input, const ParametricSystem& sys,
                                                const GridPartition& grid, const Box& params,
                                                const AbstractionOptions& opts) {
    try {
        return transition_intervals(grid.cell_box(cell), input, sys, grid, params, opts);
    } catch (const DomainError& e) {
        throw DomainError("cell " + std::to_string(cell) + ": " + e.what());
    }
}

std::vector<IntervalEntry> transition_intervals(const Box& source, const Eigen::VectorXd& input,
                                                const ParametricSystem& sys, const GridPartition& grid,
                                                const Box& params, const AbstractionOptions& opts) {
    const Box reach = sys.reach(source, input, params);
    const Eigen::VectorXd sigma = sys.noise_std();
    const int n = grid.dim();

    std::vector<DimResult> dims;
    dims.reserve(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const Interval r{reach.lo[d], reach.hi[d]};
        if (sigma[d] > 0.0)
            dims.push_back(grid.periodic(d) ? noisy_periodic(grid, d, r, sigma[d], opts.pruning_sigmas)
                                            : noisy_line(grid, d, r, sigma[d], opts.pruning_sigmas));
        else
            dims.push_back(grid.periodic(d) ? noiseless_periodic(grid, d, r) : noiseless_line(grid, d, r));
    }

    std::vector<IntervalEntry> row;
    double in_lo = 1.0;
    double in_hi = 1.0;
    double pruned = 0.0;
    bool any_target = true;
    for (const auto& dr : dims) {
        in_lo *= dr.in_lo;
        in_hi *= dr.in_hi;
        pruned += dr.pruned;
        any_target = any_target && !dr.targets.empty();
    }

    double sum_lo = 0.0;
    double sum_hi = 0.0;
    if (any_target) {
        std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (;;) {
            double lo = 1.0;
            double hi = 1.0;
            for (int d = 0; d < n; ++d) {
                const auto& t = dims[d].targets[pos[d]];
                idx[d] = t.index;
                lo *= t.lo;
                hi *= t.hi;
            }
            if (hi > 0.0) {
                row.push_back({grid.flat(idx), lo, std::min(hi, 1.0)});
                sum_lo += lo;
                sum_hi += std::min(hi, 1.0);
            }
            int d = 0;
            for (; d < n; ++d) {
                if (++pos[d] < dims[d].targets.size()) break;
                pos[d] = 0;
            }
            if (d == n) break;
        }
    }

    double sink_lo = std::max({0.0, 1.0 - in_hi, 1.0 - sum_hi});
    double sink_hi = std::min({1.0, 1.0 - in_lo + pruned, 1.0 - sum_lo});
    if (sink_hi < 0.0) sink_hi = 0.0;
    if (sink_lo > sink_hi) sink_lo = sink_hi;
    const double deficit = 1.0 - (sum_hi + sink_hi);
    if (deficit > kProbTolerance || sum_lo > 1.0 + kProbTolerance) {
        std::ostringstream os;
        os << "infeasible interval row (sum lo " << sum_lo << ", sum hi " << sum_hi + sink_hi << ")";
        throw DomainError(os.str());
    }
    if (deficit > 0.0) sink_hi = std::min(1.0, sink_hi + deficit);
    if (sink_hi > 0.0) row.push_back({grid.sink(), sink_lo, sink_hi});
    return row;
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

std::string describe_box(const char* kind, std::size_t i) { return std::string(kind) + " box #" + std::to_string(i); }

void check_box(const GridPartition& grid, const Box& box, const char* kind, std::size_t which) {
    if (box.dim() > grid.dim()) throw GeometryError(describe_box(kind, which) + " has more dimensions than the grid");
    for (int d = 0; d < box.dim(); ++d) {
        if (!(box.lo[d] <= box.hi[d])) throw GeometryError(describe_box(kind, which) + " has reversed bounds");
        const int n = grid.cells_per_dim()[d];
        const double tol = 1e-9 * (grid.boundary(d, n) - grid.boundary(d, 0));
        for (double bound : {box.lo[d], box.hi[d]}) {
            if (bound <= grid.boundary(d, 0) + tol || bound >= grid.boundary(d, n) - tol) continue;
            const int i = grid.index_along(d, bound);
            if (std::abs(bound - grid.boundary(d, i)) <= tol || std::abs(bound - grid.boundary(d, i + 1)) <= tol)
                continue;
            std::vector<int> idx(static_cast<std::size_t>(grid.dim()));
            for (int e = 0; e < grid.dim(); ++e) {
                if (e == d) {
                    idx[e] = i;
                } else {
                    double c = e < box.dim() ? 0.5 * (std::max(box.lo[e], grid.boundary(e, 0)) +
                                                      std::min(box.hi[e], grid.boundary(e, grid.cells_per_dim()[e])))
                                             : grid.boundary(e, 0);
                    idx[e] = std::max(0, grid.index_along(e, c));
                }
            }
            std::ostringstream os;
            os << describe_box(kind, which) << ": bound " << bound << " on dimension " << d << " cuts cell "
               << grid.flat(idx) << " (index " << i << " along that dimension, cell spans [" << grid.boundary(d, i)
               << ", " << grid.boundary(d, i + 1) << "])";
            throw GeometryError(os.str());
        }
    }
}

bool box_contains_prefix(const Box& box, const Eigen::VectorXd& p) {
    for (Eigen::Index d = 0; d < box.dim(); ++d)
        if (p[d] < box.lo[d] || p[d] > box.hi[d]) return false;
    return true;
}

}  // namespace

void check_geometry_alignment(const GridPartition& grid, const LabelGeometry& geometry) {
    for (std::size_t i = 0; i < geometry.goal.size(); ++i) check_box(grid, geometry.goal[i], "goal", i);
    for (std::size_t i = 0; i < geometry.unsafe.size(); ++i) check_box(grid, geometry.unsafe[i], "unsafe", i);
}

std::vector<LabelSet> label_cells(const GridPartition& grid, const LabelGeometry& geometry) {
    std::vector<LabelSet> labels(static_cast<std::size_t>(grid.num_cells()) + 1);
    for (int c = 0; c < grid.num_cells(); ++c) {
        const Eigen::VectorXd center = grid.center(c);
        for (const auto& b : geometry.goal)
            if (box_contains_prefix(b, center)) labels[c].insert(0);
        for (const auto& b : geometry.unsafe)
            if (box_contains_prefix(b, center)) labels[c].insert(1);
    }
    labels.back().insert(1);
    return labels;
}

AbstractionOutput build_abstraction(const ParametricSystem& sys, const GridPartition& grid, const ActionGrid& actions,
                                    const LabelGeometry& geometry, const Box& params,
                                    const Eigen::VectorXd& initial_state, const AbstractionOptions& opts) {
    if (grid.dim() != sys.state_dim()) throw DomainError("grid dimension differs from the system state dimension");
    if ((grid.periods() - sys.periods()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("grid periodicity differs from the system's");
    const Box ib = sys.input_bounds();
    for (const auto& u : actions.inputs)
        if ((u.array() < ib.lo.array() - 1e-12).any() || (u.array() > ib.hi.array() + 1e-12).any())
            throw DomainError("action grid point outside the input bounds");
    check_geometry_alignment(grid, geometry);
    const int init_cell = grid.cell_of(initial_state);
    if (init_cell == grid.sink()) throw DomainError("initial state lies outside the grid domain");

    const int cells = grid.num_cells();
    const int na = actions.size();
    const std::size_t nrows = static_cast<std::size_t>(cells) * static_cast<std::size_t>(na);
    std::vector<std::vector<IntervalEntry>> rows(nrows);
    parallel_chunks(nrows, opts.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r)
            rows[r] = transition_intervals(static_cast<int>(r / na), actions.inputs[r % na], sys, grid, params, opts);
    });

    const auto labels = label_cells(grid, geometry);
    AbstractionOutput out{IntervalMDP{}, grid, actions, geometry, params, initial_state, {}};
    auto& m = out.imdp;
    m.alphabet = {kGoalLabel, kUnsafeLabel};
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    m.entries.reserve(total + 1);
    m.row_offsets.reserve(nrows + 2);
    for (int c = 0; c < cells; ++c) {
        m.add_state(labels[c]);
        for (int a = 0; a < na; ++a) {
            auto& r = rows[static_cast<std::size_t>(c) * na + a];
            m.add_row(r);
            std::vector<IntervalEntry>().swap(r);
        }
    }
    m.sink = m.add_state(labels.back());
    const IntervalEntry self{m.sink, 1.0, 1.0};
    m.add_row(std::span<const IntervalEntry>(&self, 1));
    m.initial = init_cell;

    out.stats.states = static_cast<std::size_t>(m.num_states());
    out.stats.transitions = m.num_transitions();
    out.stats.rows = m.num_rows();
    const Eigen::VectorXd sigma = sys.noise_std();
    for (Eigen::Index d = 0; d < sigma.size(); ++d)
        if (sigma[d] > 0.0) out.stats.max_pruned_mass += 2.0 * upper_tail(opts.pruning_sigmas);
    return out;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json box_to_json(const Box& b) {
    return {{"lo", std::vector<double>(b.lo.data(), b.lo.data() + b.lo.size())},
            {"hi", std::vector<double>(b.hi.data(), b.hi.data() + b.hi.size())}};
}

Box box_from_json(const nlohmann::json& j) {
    const auto lo = j.at("lo").get<std::vector<double>>();
    const auto hi = j.at("hi").get<std::vector<double>>();
    if (lo.size() != hi.size()) throw DomainError("box bounds differ in dimension");
    return {Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
            Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()))};
}

nlohmann::json geometry_to_json(const LabelGeometry& g) {
    nlohmann::json j{{"goal", nlohmann::json::array()}, {"unsafe", nlohmann::json::array()}};
    for (const auto& b : g.goal) j["goal"].push_back(box_to_json(b));
    for (const auto& b : g.unsafe) j["unsafe"].push_back(box_to_json(b));
    return j;
}

LabelGeometry geometry_from_json(const nlohmann::json& j) {
    LabelGeometry g;
    if (j.contains("goal"))
        for (const auto& b : j.at("goal")) g.goal.push_back(box_from_json(b));
    if (j.contains("unsafe"))
        for (const auto& b : j.at("unsafe")) g.unsafe.push_back(box_from_json(b));
    return g;
}

nlohmann::json abstraction_metadata(const AbstractionOutput& out, const ParametricSystem& sys,
                                    const AbstractionOptions& opts) {
    nlohmann::json j;
    const auto& g = out.grid;
    j["grid"] = {{"domain", box_to_json(g.domain())},
                 {"cells", g.cells_per_dim()},
                 {"periods", std::vector<double>(g.periods().data(), g.periods().data() + g.periods().size())},
                 {"state_names", sys.state_names()}};
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& u : out.actions.inputs) inputs.push_back(std::vector<double>(u.data(), u.data() + u.size()));
    j["actions"] = {{"bounds", box_to_json(out.actions.bounds)},
                    {"counts", out.actions.counts},
                    {"input_names", sys.input_names()},
                    {"inputs", inputs}};
    j["geometry"] = geometry_to_json(out.geometry);
    j["parameter_box"] = box_to_json(out.params);
    const Eigen::VectorXd sigma = sys.noise_std();
    j["noise_std"] = std::vector<double>(sigma.data(), sigma.data() + sigma.size());
    j["pruning_sigmas"] = opts.pruning_sigmas;
    j["initial_state"] = std::vector<double>(out.initial_state.data(), out.initial_state.data() + out.initial_state.size());
    j["initial_cell"] = out.imdp.initial;
    j["sink"] = out.imdp.sink;
    j["alphabet"] = out.imdp.alphabet;
    j["stats"] = {{"states", out.stats.states},
                  {"transitions", out.stats.transitions},
                  {"rows", out.stats.rows},
                  {"max_pruned_mass_per_row", out.stats.max_pruned_mass}};
    return j;
}

GridPartition grid_from_metadata(const nlohmann::json& meta) {
    const auto& g = meta.at("grid");
    const auto periods = g.at("periods").get<std::vector<double>>();
    return {box_from_json(g.at("domain")), g.at("cells").get<std::vector<int>>(),
            Eigen::Map<const Eigen::VectorXd>(periods.data(), static_cast<Eigen::Index>(periods.size()))};
}

ActionGrid actions_from_metadata(const nlohmann::json& meta) {
    const auto& a = meta.at("actions");
    return {box_from_json(a.at("bounds")), a.at("counts").get<std::vector<int>>()};
}

}  // namespace rmdp
