#pragma once

#include <vector>

namespace oscflow {

struct QuadNode {
    double s = 0.0;
    double w = 0.0;
};

/// Even, nonincreasing profile f, constant on [0, delta_inner] and
/// affine down to zero at rho0. The quadrature approximates the measure
/// w(s) ds with w(s) = -2 s f'(s), normalized so the weights sum to one.
struct WeightProfile {
    double rho0 = 0.0;
    double delta_inner = 0.0;
    double plateau_height = 0.0;
    std::vector<QuadNode> quadrature;

    double f(double s) const;
    double fprime(double s) const;
    /// Width of each midpoint cell on [delta_inner, rho0].
    double ds() const { return (rho0 - delta_inner) / static_cast<double>(quadrature.size()); }
};

WeightProfile make_trapezoid_profile(double rho0, double delta_inner, int n_quad = 16);

/// One node with weight one: the profile collapses to a single radius.
WeightProfile make_single_radius_profile(double rho);

}  // namespace oscflow
