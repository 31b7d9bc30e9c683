#include "oscflow/profile.hpp"

#include <cmath>

#include "oscflow/error.hpp"

namespace oscflow {

double WeightProfile::f(double s) const {
    s = std::abs(s);
    if (s <= delta_inner) return plateau_height;
    if (s >= rho0) return 0.0;
    return plateau_height * (rho0 - s) / (rho0 - delta_inner);
}

double WeightProfile::fprime(double s) const {
    double a = std::abs(s);
    if (a <= delta_inner || a >= rho0) return 0.0;
    double slope = -plateau_height / (rho0 - delta_inner);
    return s < 0 ? -slope : slope;
}

WeightProfile make_trapezoid_profile(double rho0, double delta_inner, int n_quad) {
    if (!(delta_inner > 0.0) || !(rho0 > delta_inner) || !std::isfinite(rho0))
        throw Error(ErrorCode::invalid_profile, "need 0 < delta_inner < rho0");
    if (n_quad < 1) throw Error(ErrorCode::invalid_profile, "n_quad must be at least 1");

    WeightProfile p;
    p.rho0 = rho0;
    p.delta_inner = delta_inner;
    p.plateau_height = 1.0 / (rho0 + delta_inner);

    const double ds = (rho0 - delta_inner) / n_quad;
    double total = 0.0;
    for (int k = 0; k < n_quad; ++k) {
        double s = delta_inner + (k + 0.5) * ds;
        double w = -2.0 * s * p.fprime(s) * ds;
        p.quadrature.push_back({s, w});
        total += w;
    }
    for (auto& q : p.quadrature) q.w /= total;
    return p;
}

WeightProfile make_single_radius_profile(double rho) {
    if (!(rho > 0.0)) throw Error(ErrorCode::invalid_profile, "radius must be positive");
    WeightProfile p;
    p.rho0 = rho;
    p.delta_inner = rho;
    p.plateau_height = 0.0;
    p.quadrature.push_back({rho, 1.0});
    return p;
}

}  // namespace oscflow
