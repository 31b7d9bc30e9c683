#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "oscflow/cut.hpp"
#include "oscflow/energy.hpp"
#include "oscflow/grid.hpp"

namespace oscflow {

enum class Selection { minimal, maximal };

struct StepConfig {
    double h = 1.0;
    EnergyConfig energy;
    int n_levels = 64;
    Selection selection = Selection::minimal;
    /// When set, function steps quantize onto n_levels uniform values in
    /// [-level_band, level_band] instead of the field's own range. Values
    /// outside are clipped; only the zero level matters after redistancing.
    std::optional<double> level_band;
    CutOptions cut;
};

struct SetStep {
    BinarySet minus;  // minimal minimizer
    BinarySet plus;   // maximal minimizer
    bool trivial = false;  // empty or full input, returned unchanged
    double energy = 0.0;   // optimal value of the step problem
};

struct FunctionStep {
    ScalarField u;
    std::vector<BinarySet> levels;  // F_l = {u_new > t_l}, thresholds increasing
    std::vector<double> thresholds;
};

/// Keeps one cut network per grid and energy and reuses it, with its flow,
/// across levels and steps.
class Stepper {
public:
    Stepper(const Grid2D& grid, StepConfig cfg);

    const StepConfig& config() const { return cfg_; }

    /// T_h^- E and T_h^+ E: extremal minimizers of
    /// energy(F) + (1/h) sum_F d_E * spacing^2.
    SetStep step_set(const BinarySet& E);

    /// Level-wise minimization of J(v) + (1/2h) ||v - u||^2: for every
    /// threshold t, F_t minimizes J(theta) + (1/h) sum theta (t - u) spacing^2.
    FunctionStep step_function(const ScalarField& u, bool keep_levels = false);

private:
    CutSolution solve(std::span<const double> unary, int pad_label);

    Grid2D grid_;
    StepConfig cfg_;
    // One network per label of the virtual outside cell.
    std::unique_ptr<CutModel> models_[2];
    std::unique_ptr<CutSession> sessions_[2];
};

SetStep evolve_set_once(const BinarySet& E, const StepConfig& cfg);
ScalarField evolve_function_once(const ScalarField& u, const StepConfig& cfg);
/// Function step with the pairwise perimeter energy.
ScalarField evolve_tv_once(const ScalarField& u, double h, int n_levels = 64);

struct StepDiagnostics {
    int step = 0;
    double time = 0.0;
    double energy = 0.0;  // of the inside set {u <= 0}
    double area = 0.0;
    double radius = 0.0;  // sqrt(area / pi)
    double sup_change = 0.0;
    std::size_t boundary_cells = 0;
};

struct FlowTrajectory {
    std::vector<double> times;
    std::vector<ScalarField> fields;  // function mode, when kept
    std::vector<BinarySet> sets;      // inside sets {u <= 0}, when kept
    std::vector<StepDiagnostics> diagnostics;  // one per time, step 0 included
    std::optional<int> extinction_step;
};

struct FlowOptions {
    int n_steps = 1;
    int redistance_every = 1;
    bool keep_frames = true;
};

/// Function mode: redistance {u <= 0} every `redistance_every` steps, then
/// one function step.
FlowTrajectory flow(const ScalarField& u0, const StepConfig& cfg, const FlowOptions& options);
/// Set mode: E <- T_h^- E or T_h^+ E according to cfg.selection.
FlowTrajectory flow(const BinarySet& E0, const StepConfig& cfg, const FlowOptions& options);

/// Inside set {u <= 0}.
BinarySet inside_set(const ScalarField& u);
/// Area of {u <= 0} with the sub-cell weight clamp(0.5 - u / spacing, 0, 1).
double smoothed_area(const ScalarField& u);
std::size_t boundary_cell_count(const BinarySet& set);

}  // namespace oscflow
