#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "oscflow/energy.hpp"
#include "oscflow/grid.hpp"
#include "oscflow/maxflow.hpp"

namespace oscflow {

/// How window oscillations are turned into arcs.
///   direct: every window links its OR and AND node to each of its cells.
///   row_sparse: per-row sparse tables of OR/AND nodes over power-of-two
///   runs; a window links to two table nodes per row it covers.
enum class CutEncoding { direct, row_sparse };

struct CutOptions {
    CutEncoding encoding = CutEncoding::row_sparse;
    double quantum = 1.0 / 4294967296.0;
    FlowAlgorithm algorithm = FlowAlgorithm::search_trees;
};

struct CutSolution {
    BinarySet min_labeling;
    BinarySet max_labeling;
    double flow_value = 0.0;  // max-flow of the network in real units
    double energy = 0.0;      // optimal quantized energy in real units
    std::int64_t energy_units = 0;
};

/// An explicit binary energy: sum of c * osc over windows, pairwise
/// c * |a - b| terms, and unary g * theta. A window may carry a virtual
/// outside cell with a fixed label (`pad` = 0 or 1).
struct BinaryEnergy {
    struct Window {
        std::vector<int> cells;
        double weight = 0.0;
        int pad = -1;
    };
    struct Pair {
        int a = 0, b = 0;
        double weight = 0.0;
    };

    Grid2D grid;
    std::vector<Window> windows;
    std::vector<Pair> pairs;
    std::vector<double> unary;

    /// Windows of every ball centered at every cell, following the grid's boundary mode.
    static BinaryEnergy from_osc(const Grid2D& grid, std::span<const WeightedBall> terms, std::span<const double> unary);

    double evaluate(const BinarySet& theta) const;
    /// The energy after rounding every coefficient to a multiple of `quantum`.
    std::int64_t evaluate_units(const BinarySet& theta, double quantum) const;
};

struct BruteForceResult {
    std::int64_t optimum_units = 0;
    std::vector<BinarySet> minimizers;
    BinarySet lattice_min;
    BinarySet lattice_max;
};

/// Exhaustive scan of all 2^n labelings, n <= 20.
BruteForceResult brute_force_binary_min(const BinaryEnergy& energy, double quantum = CutOptions{}.quantum);

/// A flow network together with the bookkeeping needed to read a binary
/// labeling and the energy back from a cut.
struct CutGraph {
    Grid2D grid;
    FlowNetwork network;
    double quantum = CutOptions{}.quantum;
    std::int64_t offset_units = 0;  // energy = cut + offset
    FlowAlgorithm algorithm = FlowAlgorithm::search_trees;
};

/// Graph for sum_w c_w osc_w(theta) + sum g_i theta_i; one-shot form of OscCutModel.
CutGraph build_binary_osc_graph(const Grid2D& grid, std::span<const WeightedBall> terms, const ScalarField& unary,
                                const CutOptions& options = {});
/// Graph for an explicit energy, direct encoding.
CutGraph build_binary_graph(const BinaryEnergy& energy, const CutOptions& options = {});

CutSolution solve_min_cut(CutGraph& graph);

/// Graph topology for a fixed grid and energy, reused across many unary
/// fields. Unary magnitudes beyond the total window weight touching a cell
/// are clamped: the cell's label is forced either way, so the minimizers do
/// not change.
class CutModel {
public:
    /// Oscillation energy (osc_single / osc_profile).
    CutModel(const Grid2D& grid, std::vector<WeightedBall> terms, CutOptions options = {});
    /// Pairwise energy with explicit (a, b, weight) edges.
    CutModel(const Grid2D& grid, std::vector<BinaryEnergy::Pair> pairs, CutOptions options = {});
    /// Windows and pairs of an explicit energy, direct encoding; its unary is ignored.
    explicit CutModel(const BinaryEnergy& energy, CutOptions options = {});

    /// A fresh copy of the network with terminals for this unary field.
    CutGraph prepare(std::span<const double> unary) const;
    CutSolution solve(std::span<const double> unary) const;

    const Grid2D& grid() const { return grid_; }
    std::size_t node_count() const { return static_cast<std::size_t>(graph_.network.node_count()); }
    std::size_t arc_count() const { return graph_.network.arc_count(); }
    double quantum() const { return graph_.quantum; }

private:
    friend class CutSession;
    /// Unary units clamped to just past the cell's total coupling, plus the
    /// part cut away below (such cells are 1 in every minimizer).
    std::pair<cap_t, cap_t> clamped_units(std::size_t cell, double value) const;

    struct AuxTerminal {
        int node;
        cap_t source, sink;
    };
    struct Arc {
        int u, v;
        cap_t cap, rev;  // negative marks an infinite capacity
    };
    void finish(const std::vector<Arc>& arcs);

    Grid2D grid_;
    CutOptions options_;
    CutGraph graph_;
    std::vector<std::int64_t> touch_units_;  // total weight of the terms touching each cell
    std::vector<AuxTerminal> aux_terminals_;
};

/// Solves a sequence of unary fields on one network. Each solve continues
/// from the previous flow and search trees; only cells whose unary changed
/// are touched. Results match CutModel::solve exactly.
class CutSession {
public:
    explicit CutSession(const CutModel& model);
    CutSolution solve(std::span<const double> unary);

private:
    const CutModel* model_;
    CutGraph graph_;
    std::vector<cap_t> units_;
    std::vector<cap_t> excess_;
    bool started_ = false;
};

/// 8-neighbour pairwise edges whose cut length approximates the Euclidean
/// perimeter, scaled by spacing.
std::vector<BinaryEnergy::Pair> tv_pairs(const Grid2D& grid);

/// Energy model for the configured kind on this grid.
CutModel make_cut_model(const Grid2D& grid, const EnergyConfig& cfg, const CutOptions& options = {});

std::int64_t to_units(double value, double quantum);

}  // namespace oscflow
