#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscflow/error.hpp"
#include "oscflow/oracle.hpp"

using namespace oscflow;
using std::numbers::pi;

namespace {

// Trapezoid rule on [delta, rho0] with f' = -H / (rho0 - delta) there.
double rhs_by_integration(double r, const WeightProfile& p, int n = 1000000) {
    const double a = p.delta_inner, b = p.rho0, ds = (b - a) / n;
    const double fp = -p.plateau_height / (b - a);
    auto integrand = [&](double s) { return fp * ((1.0 + s / r) - std::max(1.0 - s / r, 0.0)); };
    double sum = 0.5 * (integrand(a) + integrand(b));
    for (int k = 1; k < n; ++k) sum += integrand(a + k * ds);
    return sum * ds;
}

// Two-dimensional proximal energy in the regime r >= rho0.
double proximal_energy_closed_form(double r, double R, double h) {
    return 2.0 * pi * r + 2.0 * pi / h * (R * (R * R - r * r) / 2.0 - (R * R * R - r * r * r) / 3.0);
}

double max_deviation_from_ode(const std::vector<double>& radii, double h, const BallTrajectory& ode) {
    double worst = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double t = static_cast<double>(i) * h;
        if (t > 0.9 * ode.extinction_time) break;
        worst = std::max(worst, std::abs(radii[i] - ode.radius_at(t)));
    }
    return worst;
}

}  // namespace

TEST_CASE("ball velocity") {
    const auto p = make_trapezoid_profile(6.0, 2.0, 16);
    for (double r : {6.0, 7.5, 24.0, 1000.0}) CHECK(ball_rhs(r, p) == doctest::Approx(-1.0 / r).epsilon(1e-13));
    // Below the plateau the inner term vanishes: g = -f(0) - 1 / (2 r).
    for (double r : {0.01, 0.5, 1.0, 2.0}) CHECK(ball_rhs(r, p) == doctest::Approx(-p.f(0.0) - 0.5 / r).epsilon(1e-13));

    for (int k = 1; k <= 400; ++k) {
        const double r = 0.025 * k;
        CHECK(ball_rhs(r, p) < 0.0);
        CHECK(ball_rhs(r, p, 3) < 0.0);
    }
    CHECK_THROWS_AS(ball_rhs(0.0, p), Error);
    CHECK_THROWS_AS(ball_rhs(-1.0, p), Error);
    CHECK_THROWS_AS(ball_rhs(1.0, p, 1), Error);

    SUBCASE("agrees with direct integration") {
        for (double r : {6.0, 9.0, 30.0}) CHECK(std::abs(ball_rhs(r, p) - rhs_by_integration(r, p)) <= 1e-8);
        // Between delta and rho0 the bracket has a kink at s = r; the midpoint
        // rule converges there at first order in the node spacing.
        double prev = 1.0;
        for (int n : {16, 64, 256, 1024}) {
            const auto q = make_trapezoid_profile(6.0, 2.0, n);
            const double err = std::abs(ball_rhs(3.3, q) - rhs_by_integration(3.3, q));
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev <= 1e-5);
    }

    SUBCASE("small-radius bound") {
        const auto ec = extinction_constants(p);
        CHECK(ec.c > 0.0);
        CHECK(ec.c0 == doctest::Approx(1.0 / (2.0 * ec.c)));
        for (int k = 1; k <= 1000; ++k) {
            const double r = k / 1000.0;
            CHECK(std::abs(ball_rhs(r, p)) * r <= ec.c * (1.0 + 1e-12));
        }
        // |g| r = f(0) r + 1/2 is largest at r = 1.
        CHECK(ec.c == doctest::Approx(p.f(0.0) + 0.5).epsilon(1e-9));
    }
}

TEST_CASE("ball ODE") {
    const auto p = make_trapezoid_profile(6.0, 2.0, 16);
    auto tr = ball_ode_integrate({24.0, p, 2, 1e-3});
    CHECK(std::is_sorted(tr.t.begin(), tr.t.end()));
    for (std::size_t k = 1; k < tr.r.size(); ++k) CHECK(tr.r[k] < tr.r[k - 1]);
    const double t6 = (24.0 * 24.0 - 36.0) / 2.0;
    for (std::size_t k = 0; k < tr.t.size() && tr.t[k] <= t6; ++k)
        CHECK(std::abs(tr.r[k] - std::sqrt(576.0 - 2.0 * tr.t[k])) <= 1e-6);
    // Below rho0 the velocity is smaller than 1/r, so the tail is slower.
    double tail = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) tail -= 6.0 / n / ball_rhs(6.0 * (k + 0.5) / n, p);
    CHECK(tr.extinction_time == doctest::Approx(t6 + tail).epsilon(1e-7));
    CHECK(tr.extinction_time > 288.0);
    CHECK(tr.radius_at(tr.extinction_time + 1.0) == 0.0);
    CHECK(tr.radius_at(0.0) == 24.0);

    SUBCASE("step halving") {
        auto a = ball_ode_integrate({24.0, p, 2, 0.02});
        auto b = ball_ode_integrate({24.0, p, 2, 0.01});
        double worst = 0.0;
        for (int k = 0; k <= 900; ++k) {
            const double t = 0.9 * b.extinction_time * k / 900.0;
            worst = std::max(worst, std::abs(a.radius_at(t) - b.radius_at(t)));
        }
        CHECK(worst <= 1e-6);
        CHECK(std::abs(a.extinction_time - b.extinction_time) <= 1e-3);
    }

    SUBCASE("extinction lower bound") {
        const auto ec = extinction_constants(p);
        for (int k = 1; k <= 10; ++k) {
            const double r0 = 0.1 * k;
            auto small = ball_ode_integrate({r0, p, 2, 1e-5});
            CHECK(small.extinction_time >= ec.c0 * r0 * r0);
        }
    }

    CHECK_THROWS_AS(ball_ode_integrate({0.0, p, 2, 1e-3}), Error);
    CHECK_THROWS_AS(ball_ode_integrate({1.0, p, 2, 0.0}), Error);
}

TEST_CASE("proximal ball step") {
    const auto p = make_trapezoid_profile(6.0, 2.0, 16);
    SUBCASE("large radius closed form") {
        const double R = 24.0, h = 8.0;
        const double exact = (R + std::sqrt(R * R - 4.0 * h)) / 2.0;
        CHECK(std::abs(proximal_ball_radius(R, h, p) - exact) <= 1e-9);
        CHECK(exact == doctest::Approx(23.661903789690601).epsilon(1e-14));
        auto step = proximal_ball_step(R, h, p);
        CHECK_FALSE(step.extinct);
        // g diverges at r = 0, so a second, small root always exists.
        CHECK(step.sign_changes == 2);
        CHECK(step.radius == proximal_ball_radius(R, h, p));
    }
    SUBCASE("limits") {
        CHECK(proximal_ball_radius(24.0, 1e-8, p) == doctest::Approx(24.0).epsilon(1e-9));
        CHECK(proximal_ball_radius(0.5, 100.0, p) == 0.0);
        CHECK(proximal_ball_step(0.5, 100.0, p).extinct);
        CHECK_THROWS_AS(proximal_ball_radius(0.0, 1.0, p), Error);
        CHECK_THROWS_AS(proximal_ball_radius(1.0, 0.0, p), Error);
    }
    SUBCASE("energy closed form") {
        for (double r : {6.0, 10.0, 20.0, 24.0})
            CHECK(proximal_ball_energy(r, 24.0, 8.0, p) == doctest::Approx(proximal_energy_closed_form(r, 24.0, 8.0)).epsilon(1e-10));
    }
    SUBCASE("monotone in R and in h") {
        double prev = 0.0;
        for (int k = 1; k <= 60; ++k) {
            const double r = proximal_ball_radius(0.5 * k, 2.0, p);
            CHECK(r >= prev);
            prev = r;
        }
        prev = 30.0;
        for (double h : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            const double r = proximal_ball_radius(20.0, h, p);
            CHECK(r <= prev);
            prev = r;
        }
    }
    SUBCASE("the stationary radius is the global minimizer") {
        for (double R : {3.0, 5.0, 8.0, 12.0, 24.0})
            for (double h : {0.5, 2.0, 8.0}) {
                const double r = proximal_ball_radius(R, h, p);
                const double empty = pi * R * R * R / (3.0 * h);
                double best = empty;
                for (int k = 1; k <= 4000; ++k) best = std::min(best, proximal_ball_energy(R * k / 4000.0, R, h, p));
                const double e = r > 0.0 ? proximal_ball_energy(r, R, h, p) : empty;
                CHECK(e <= best + 1e-9 * std::max(1.0, std::abs(best)));
            }
    }
    SUBCASE("iterated steps approach the ODE") {
        auto ode = ball_ode_integrate({24.0, p, 2, 1e-3});
        double prev = 2.0;
        for (double h : {4.0, 2.0, 1.0}) {
            auto radii = proximal_ball_sequence(24.0, h, p, 100000);
            CHECK(radii.front() == 24.0);
            CHECK(radii.back() == 0.0);
            const double dev = max_deviation_from_ode(radii, h, ode);
            CHECK(dev <= 0.55 * prev);
            prev = dev;
        }
        CHECK(prev <= 0.1);
    }
}

TEST_CASE("disk energies") {
    CHECK(disk_energy_exact(16.0, 4.0) == doctest::Approx(100.53096491487338).epsilon(1e-14));
    CHECK(disk_energy_exact(1.0, 2.0) == doctest::Approx(7.0685834705770345).epsilon(1e-14));
    CHECK(std::abs(disk_energy_exact(5.0, 1e-6) - 10.0 * pi) <= 1e-5);
    CHECK_THROWS_AS(disk_energy_exact(0.0, 1.0), Error);
    CHECK_THROWS_AS(disk_energy_exact(1.0, 0.0), Error);
    CHECK(unit_ball_volume(2) == doctest::Approx(pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
}
