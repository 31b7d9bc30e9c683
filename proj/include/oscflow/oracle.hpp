#pragma once

#include <vector>

#include "oscflow/profile.hpp"

namespace oscflow {

/// Normal velocity of a ball of radius r under the profile energy:
/// g(r) = sum_k f'(s_k) [(1 + s/r)^(d-1) - ((1 - s/r)^+)^(d-1)] ds.
/// Always negative.
double ball_rhs(double r, const WeightProfile& profile, int d = 2);

struct BallODEConfig {
    double r0 = 1.0;
    WeightProfile profile;
    int d = 2;
    double dt = 1e-2;
};

struct BallTrajectory {
    std::vector<double> t;
    std::vector<double> r;
    double extinction_time = 0.0;

    /// Linear interpolation; 0 after extinction.
    double radius_at(double time) const;
};

/// RK4 until the radius reaches zero. The step is halved whenever a stage
/// would leave r > 0; the final crossing is extrapolated linearly.
BallTrajectory ball_ode_integrate(const BallODEConfig& cfg);

/// c = sup_{0 < r <= 1} |g(r)| r^(d-1) and c0 = 1 / (d c), so that the
/// comparison flow r' = -c r^(1-d) gives T*(r0) >= c0 r0^d for r0 <= 1.
struct ExtinctionConstants {
    double c = 0.0;
    double c0 = 0.0;
};
ExtinctionConstants extinction_constants(const WeightProfile& profile, int d = 2);

/// Energy of one proximal step from the ball of radius R to radius r in (0, R]:
/// profile energy of B_r plus (1/h) * integral over B_R \ B_r of dist(x, dB_R).
double proximal_ball_energy(double r, double R, double h, const WeightProfile& profile, int d = 2);

struct ProximalBallResult {
    double radius = 0.0;
    int sign_changes = 0;  // of (r - R)/h - g(r) on the scan grid
    bool extinct = false;
};

/// Largest root of (r - R)/h = g(r) in (0, R], checked against the empty
/// set; 0 when no root exists or the empty set has lower energy.
ProximalBallResult proximal_ball_step(double R, double h, const WeightProfile& profile, int d = 2);
double proximal_ball_radius(double R, double h, const WeightProfile& profile, int d = 2);

/// Iterated proximal radii R, r_1, r_2, ... until extinction or max_steps.
std::vector<double> proximal_ball_sequence(double R, double h, const WeightProfile& profile, int max_steps, int d = 2);

/// pi ((R + rho)^2 - ((R - rho)^+)^2) / (2 rho).
double disk_energy_exact(double R, double rho);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace oscflow
