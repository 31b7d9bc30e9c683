#pragma once

#include <vector>

#include "oscflow/grid.hpp"
#include "oscflow/profile.hpp"
#include "oscflow/scheme.hpp"

namespace oscflow {

struct BallExperimentConfig {
    int size = 128;
    double radius = 24.0;
    WeightProfile profile = make_trapezoid_profile(6.0, 2.0, 4);
    double h = 4.0;
    int steps = 30;
    int n_levels = 12;
    double level_band = 1.5;
    /// Run only the T_h^- trajectory; r_plus is then left empty.
    bool minus_only = false;
};

struct BallExperiment {
    std::vector<double> time;
    std::vector<double> r_minus;  // inside sets from T_h^-
    std::vector<double> r_plus;   // inside sets from T_h^+
    std::vector<double> r_ode;
    double extinction_time = 0.0;
    /// Largest |r_discrete - r_ode| over times up to 0.8 extinction_time.
    double max_deviation = 0.0;
};

/// Function-mode flow of the disk |x - c| - radius on a size^2 grid,
/// with c the grid center, against the ball ODE.
BallExperiment run_ball_experiment(const BallExperimentConfig& cfg);

/// Vertical stripes, `period / 2` cells on and the rest off, filling the
/// square [margin, size - margin) of the grid.
BinarySet stripe_pattern(const Grid2D& grid, int period, int margin);

/// 4-connected components, ordered by their first cell in row-major order.
std::vector<BinarySet> connected_components(const BinarySet& set);

/// Steps a component lasts in `frames` (frames[0] is the initial set). A
/// component is alive while at least half of its cells are inside and at
/// least half of the cells 4-adjacent to it from outside are outside. Never
/// dying gives frames.size().
std::vector<int> component_survival(const std::vector<BinarySet>& components, const std::vector<BinarySet>& frames);

double median(std::vector<int> values);

struct FlowComparison {
    FlowTrajectory osc;
    FlowTrajectory tv;
    std::vector<int> osc_survival;
    std::vector<int> tv_survival;
    double ratio = 0.0;  // median osc survival over median tv survival
};

/// Set-mode flows of E0 under the oscillation energy of radius rho and under
/// the perimeter, with the same h. Throws domain when E0 has no components.
FlowComparison compare_flows(const BinarySet& E0, double rho, double h, int steps);

}  // namespace oscflow
