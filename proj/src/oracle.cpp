#include "oscflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscflow/error.hpp"

namespace oscflow {

double ball_rhs(double r, const WeightProfile& profile, int d) {
    if (!(r > 0.0)) throw Error(ErrorCode::domain, "ball radius must be positive");
    if (d < 2) throw Error(ErrorCode::domain, "dimension must be at least 2");
    double g = 0.0;
    for (const auto& q : profile.quadrature) {
        const double x = q.s / r;
        const double bracket = std::pow(1.0 + x, d - 1) - std::pow(std::max(1.0 - x, 0.0), d - 1);
        // f'(s) ds = -w / (2 s)
        g -= q.w / (2.0 * q.s) * bracket;
    }
    return g;
}

double BallTrajectory::radius_at(double time) const {
    if (t.empty() || time >= extinction_time) return 0.0;
    if (time <= t.front()) return r.front();
    auto it = std::upper_bound(t.begin(), t.end(), time);
    if (it == t.end()) {
        // Between the last stored point and extinction.
        double t1 = t.back(), r1 = r.back();
        return r1 * (extinction_time - time) / (extinction_time - t1);
    }
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    double a = (time - t[k - 1]) / (t[k] - t[k - 1]);
    return r[k - 1] + a * (r[k] - r[k - 1]);
}

BallTrajectory ball_ode_integrate(const BallODEConfig& cfg) {
    if (!(cfg.r0 > 0.0) || !(cfg.dt > 0.0)) throw Error(ErrorCode::invalid_argument, "need r0 > 0 and dt > 0");
    BallTrajectory tr;
    double t = 0.0, r = cfg.r0;
    tr.t.push_back(t);
    tr.r.push_back(r);
    auto f = [&](double x) { return ball_rhs(x, cfg.profile, cfg.d); };
    double dt = cfg.dt;
    const double r_floor = 1e-9 * cfg.r0;
    while (r > r_floor) {
        double k1 = f(r);
        double r2 = r + 0.5 * dt * k1;
        double k2 = r2 > 0 ? f(r2) : 0.0;
        double r3 = r + 0.5 * dt * k2;
        double k3 = (r2 > 0 && r3 > 0) ? f(r3) : 0.0;
        double r4 = r + dt * k3;
        bool ok = r2 > 0 && r3 > 0 && r4 > 0;
        double next = ok ? r + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + f(r4)) : 0.0;
        if (!ok || !(next > 0.0)) {
            if (dt < 1e-14 * std::max(1.0, t)) break;
            dt *= 0.5;
            continue;
        }
        t += dt;
        r = next;
        tr.t.push_back(t);
        tr.r.push_back(r);
    }
    // Finish along the tangent from the last accepted point.
    tr.extinction_time = t + r / std::abs(f(r));
    return tr;
}

ExtinctionConstants extinction_constants(const WeightProfile& profile, int d) {
    // |g(r)| r^(d-1) is nondecreasing in r, so the sup over (0, 1] sits at r = 1.
    ExtinctionConstants k;
    k.c = std::abs(ball_rhs(1.0, profile, d));
    k.c0 = 1.0 / (d * k.c);
    return k;
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double proximal_ball_energy(double r, double R, double h, const WeightProfile& profile, int d) {
    const double w = unit_ball_volume(d);
    double e = 0.0;
    for (const auto& q : profile.quadrature)
        e += q.w * w * (std::pow(r + q.s, d) - std::pow(std::max(r - q.s, 0.0), d)) / (2.0 * q.s);
    if (r <= 0.0) e = 0.0;
    const double diss = R * (std::pow(R, d) - std::pow(r, d)) / d - (std::pow(R, d + 1) - std::pow(r, d + 1)) / (d + 1);
    return e + d * w / h * diss;
}

ProximalBallResult proximal_ball_step(double R, double h, const WeightProfile& profile, int d) {
    if (!(R > 0.0) || !(h > 0.0)) throw Error(ErrorCode::invalid_argument, "need R > 0 and h > 0");
    auto phi = [&](double r) { return (r - R) / h - ball_rhs(r, profile, d); };
    ProximalBallResult res;

    constexpr int n = 4000;
    double best_lo = -1.0;
    double prev_v = phi(R);
    for (int k = n - 1; k >= 1; --k) {
        double r = R * k / n;
        double v = phi(r);
        if ((v < 0) != (prev_v < 0)) {
            ++res.sign_changes;
            if (best_lo < 0.0 && v < 0) best_lo = r;
        }
        prev_v = v;
    }
    if (best_lo < 0.0) {
        res.extinct = true;
        return res;
    }
    double lo = best_lo, hi = std::min(R, best_lo + R / n);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) < 0) lo = mid;
        else hi = mid;
    }
    double r = 0.5 * (lo + hi);
    if (proximal_ball_energy(0.0, R, h, profile, d) < proximal_ball_energy(r, R, h, profile, d)) {
        res.extinct = true;
        return res;
    }
    res.radius = r;
    return res;
}

double proximal_ball_radius(double R, double h, const WeightProfile& profile, int d) {
    return proximal_ball_step(R, h, profile, d).radius;
}

std::vector<double> proximal_ball_sequence(double R, double h, const WeightProfile& profile, int max_steps, int d) {
    std::vector<double> out{R};
    for (int k = 0; k < max_steps && out.back() > 0.0; ++k) out.push_back(proximal_ball_radius(out.back(), h, profile, d));
    return out;
}

double disk_energy_exact(double R, double rho) {
    if (!(R > 0.0) || !(rho > 0.0)) throw Error(ErrorCode::invalid_argument, "need R > 0 and rho > 0");
    const double inner = std::max(R - rho, 0.0);
    return std::numbers::pi * ((R + rho) * (R + rho) - inner * inner) / (2.0 * rho);
}

}  // namespace oscflow
