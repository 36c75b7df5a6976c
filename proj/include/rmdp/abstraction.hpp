#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "rmdp/dynamics.hpp"
#include "rmdp/imdp.hpp"

namespace rmdp {

/// Rectangular partition of a box domain. Cells are half-open [lo, hi) per
/// dimension except the last cell, which is closed; periodic dimensions wrap.
/// Cell ids are mixed-radix with dimension 0 varying fastest; the id one past
/// the last cell denotes everything outside the domain.
class GridPartition {
public:
    GridPartition(Box domain, std::vector<int> cells, Eigen::VectorXd periods);

    [[nodiscard]] int dim() const { return static_cast<int>(cells_.size()); }
    [[nodiscard]] const Box& domain() const { return domain_; }
    [[nodiscard]] const std::vector<int>& cells_per_dim() const { return cells_; }
    [[nodiscard]] const Eigen::VectorXd& periods() const { return periods_; }
    [[nodiscard]] bool periodic(int d) const { return periods_[d] > 0.0; }
    [[nodiscard]] int num_cells() const { return total_; }
    [[nodiscard]] int sink() const { return total_; }
    [[nodiscard]] Eigen::VectorXd widths() const;

    /// i-th boundary along dimension d, 0 <= i <= cells[d].
    [[nodiscard]] double boundary(int d, int i) const;
    /// Index along dimension d containing v, or -1 outside the domain.
    [[nodiscard]] int index_along(int d, double v) const;

    [[nodiscard]] int cell_of(const Eigen::VectorXd& s) const;
    [[nodiscard]] std::vector<int> indices(int cell) const;
    [[nodiscard]] int flat(const std::vector<int>& idx) const;
    [[nodiscard]] Box cell_box(int cell) const;
    [[nodiscard]] Eigen::VectorXd center(int cell) const { return cell_box(cell).center(); }

private:
    Box domain_;
    std::vector<int> cells_;
    Eigen::VectorXd periods_;
    std::vector<int> strides_;
    int total_ = 0;
};

/// Uniform grid over the input box; grid points include the bounds. A single
/// point along a dimension sits at its midpoint.
struct ActionGrid {
    Box bounds;
    std::vector<int> counts;
    std::vector<Eigen::VectorXd> inputs;

    ActionGrid(Box b, std::vector<int> c);
    [[nodiscard]] int size() const { return static_cast<int>(inputs.size()); }
};

/// Axis-aligned goal and unsafe regions. Boxes may list fewer dimensions than
/// the state; missing trailing dimensions are unconstrained.
struct LabelGeometry {
    std::vector<Box> goal;
    std::vector<Box> unsafe;
};

/// Interval on the Gaussian mass N(m, sigma^2)([l, u]) over m in [m_lo, m_hi].
Interval gaussian_mass_bounds(Interval target, Interval mean, double sigma);
/// N(m, sigma^2)([l, u]) evaluated with tail-accurate complementary error functions.
double gaussian_mass(Interval target, double m, double sigma);

struct AbstractionOptions {
    double pruning_sigmas = 6.0;  ///< skip noisy-dimension targets further than this many sigma
    int threads = 0;
};

/// Interval row for one (cell, action): every concrete state in the cell and
/// every parameter in the box yields a next-cell distribution inside these
/// bounds. Out-of-domain and pruned mass is routed to the grid's sink id.
std::vector<IntervalEntry> transition_intervals(int cell, const Eigen::VectorXd& input, const ParametricSystem& sys,
                                                const GridPartition& grid, const Box& params,
                                                const AbstractionOptions& opts = {});
/// Same bounds for an arbitrary source box instead of a grid cell.
std::vector<IntervalEntry> transition_intervals(const Box& source, const Eigen::VectorXd& input,
                                                const ParametricSystem& sys, const GridPartition& grid,
                                                const Box& params, const AbstractionOptions& opts = {});

struct AbstractionStats {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t rows = 0;
    double max_pruned_mass = 0.0;
};

struct AbstractionOutput {
    IntervalMDP imdp;
    GridPartition grid;
    ActionGrid actions;
    LabelGeometry geometry;
    Box params;
    Eigen::VectorXd initial_state;
    AbstractionStats stats;
};

inline const char* kGoalLabel = "G";
inline const char* kUnsafeLabel = "U";

/// Thrown when a goal/unsafe box boundary cuts through a grid cell.
class GeometryError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Rejects geometry whose boxes are not unions of cells.
void check_geometry_alignment(const GridPartition& grid, const LabelGeometry& geometry);
/// Cell labels (G, U) by containment in the geometry; the sink is U.
std::vector<LabelSet> label_cells(const GridPartition& grid, const LabelGeometry& geometry);

AbstractionOutput build_abstraction(const ParametricSystem& sys, const GridPartition& grid, const ActionGrid& actions,
                                    const LabelGeometry& geometry, const Box& params,
                                    const Eigen::VectorXd& initial_state, const AbstractionOptions& opts = {});

nlohmann::json box_to_json(const Box& b);
Box box_from_json(const nlohmann::json& j);
/// Grid, interface map (abstract action -> input vector), geometry, parameter
/// box and build counts.
nlohmann::json abstraction_metadata(const AbstractionOutput& out, const ParametricSystem& sys,
                                    const AbstractionOptions& opts);
GridPartition grid_from_metadata(const nlohmann::json& meta);
ActionGrid actions_from_metadata(const nlohmann::json& meta);
LabelGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const LabelGeometry& g);

}  // namespace rmdp
