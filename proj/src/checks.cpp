#include "oscflow/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "oscflow/curvature.hpp"
#include "oscflow/energy.hpp"
#include "oscflow/error.hpp"

namespace oscflow {

BinarySet random_blob(const Grid2D& grid, std::mt19937_64& rng, int disks, double r_min, double r_max) {
    std::uniform_real_distribution<double> ux(0.0, grid.width() - 1.0), uy(0.0, grid.height() - 1.0), ur(r_min, r_max);
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int k = 0; k < disks; ++k) {
        const double cx = ux(rng), cy = uy(rng), r = ur(rng);
        for (int y = 0; y < grid.height(); ++y)
            for (int x = 0; x < grid.width(); ++x)
                if (std::hypot(x - cx, y - cy) <= r) mask[grid.index({x, y})] = 1;
    }
    return {grid, std::move(mask)};
}

BinarySet dilate(const BinarySet& set, double r) {
    const Grid2D& g = set.grid();
    const auto ball = make_discrete_ball(r);
    std::vector<std::uint8_t> mask(g.size(), 0);
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            if (!set.at(x, y)) continue;
            for (const Cell& o : ball.offsets) {
                const Cell c{x + o.x, y + o.y};
                if (g.contains(c)) mask[g.index(c)] = 1;
            }
        }
    return {g, std::move(mask)};
}

namespace {

using Property = std::function<std::string(std::mt19937_64&, int)>;  // empty string = pass

CheckOutcome run_property(const std::string& name, int trials, std::uint64_t seed, const Property& body) {
    std::mt19937_64 rng(seed);
    CheckOutcome out{name, true, std::to_string(trials) + " instances"};
    for (int t = 0; t < trials; ++t) {
        std::string failure;
        try {
            failure = body(rng, t);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        if (!failure.empty()) {
            out.ok = false;
            out.detail = "instance " + std::to_string(t) + ": " + failure;
            break;
        }
    }
    return out;
}

BoundaryMode random_boundary(std::mt19937_64& rng) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: return BoundaryMode::clip();
        case 1: return BoundaryMode::pad(0.0);
        default: return BoundaryMode::pad(1.0);
    }
}

std::vector<CheckOutcome> energy_suite(const CheckOptions& opt) {
    const int trials = opt.trials > 0 ? opt.trials : 200;
    std::vector<CheckOutcome> out;
    out.push_back(run_property("energy: submodularity on random pairs", trials, opt.seed, [](auto& rng, int) {
        static constexpr double radii[] = {1.0, 1.5, 2.0, 3.0};
        const double rho = radii[std::uniform_int_distribution<int>(0, 3)(rng)];
        Grid2D g(32, 32, 1.0, random_boundary(rng));
        auto A = random_blob(g, rng, 4, 1.0, 7.0), B = random_blob(g, rng, 4, 1.0, 7.0);
        auto ball = make_discrete_ball(rho);
        const auto lhs = mixed_window_count(A.united(B), ball) + mixed_window_count(A.intersected(B), ball);
        const auto rhs = mixed_window_count(A, ball) + mixed_window_count(B, ball);
        if (lhs > rhs) return "E(A u B) + E(A n B) = " + std::to_string(lhs) + " > " + std::to_string(rhs);
        return std::string();
    }));
    out.push_back(run_property("energy: coarea identity on quantized fields", trials, opt.seed + 1, [](auto& rng, int) {
        static constexpr double radii[] = {1.0, 1.5, 2.0, 3.0};
        const double rho = radii[std::uniform_int_distribution<int>(0, 3)(rng)];
        const int top = std::uniform_int_distribution<int>(1, 8)(rng);
        std::uniform_int_distribution<int> value(0, top);
        BoundaryMode b = std::uniform_int_distribution<int>(0, 1)(rng) ? BoundaryMode::clip()
                                                                         : BoundaryMode::pad(value(rng));
        Grid2D g(32, 32, 1.0, b);
        std::vector<double> v(g.size());
        for (double& x : v) x = value(rng);
        ScalarField f(g, std::move(v));
        const double direct = osc_sum(f, make_discrete_ball(rho));
        double layered = 0.0;
        for (const auto& level : coarea_decompose(f, rho)) layered += level.gap * static_cast<double>(level.mixed_windows);
        if (direct != layered) {
            std::ostringstream s;
            s << "window sum " << direct << " != level sum " << layered;
            return s.str();
        }
        return std::string();
    }));
    return out;
}

std::vector<CheckOutcome> cut_suite(const CheckOptions& opt) {
    const int trials = opt.trials > 0 ? opt.trials : 100;
    auto property = [&](bool lattice) {
        return [lattice, q = opt.quantum](std::mt19937_64& rng, int t) {
            std::uniform_int_distribution<int> side(2, 4);
            const double rho = std::uniform_int_distribution<int>(0, 1)(rng) ? 1.5 : 1.0;
            Grid2D g(side(rng), side(rng), 1.0, random_boundary(rng));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            std::vector<double> unary(g.size());
            for (double& x : unary) x = u(rng);
            const auto balls = weighted_balls(EnergyConfig::osc(rho), 1.0);
            const auto energy = BinaryEnergy::from_osc(g, balls, unary);
            const auto bf = brute_force_binary_min(energy, q);

            CutOptions options;
            options.quantum = q;
            options.algorithm = t % 2 ? FlowAlgorithm::bfs_augment : FlowAlgorithm::search_trees;
            const CutSolution sols[] = {make_cut_model(g, EnergyConfig::osc(rho), options).solve(unary),
                                        CutModel(energy, options).solve(unary)};
            for (const auto& sol : sols) {
                if (!lattice && sol.energy_units != bf.optimum_units)
                    return "cut " + std::to_string(sol.energy_units) + " != exhaustive " + std::to_string(bf.optimum_units);
                if (lattice && (sol.min_labeling != bf.lattice_min || sol.max_labeling != bf.lattice_max))
                    return std::string("labelings differ from the lattice extremes");
            }
            return std::string();
        };
    };
    return {run_property("cut: optimum equals exhaustive minimum", trials, opt.seed + 2, property(false)),
            run_property("cut: labelings are the extremal minimizers", trials, opt.seed + 2, property(true))};
}

struct RandomDiskConfig {
    SmoothSetDescriptor disk = SmoothSetDescriptor::empty();
    WeightProfile profile;
    Vec2 x, nu;
    double R = 1.0;
};

RandomDiskConfig random_disk_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RandomDiskConfig c;
    c.R = 0.5 + 19.5 * U(rng);
    const Vec2 center{10.0 * U(rng) - 5.0, 10.0 * U(rng) - 5.0};
    const double a = 2.0 * std::numbers::pi * U(rng);
    c.nu = {std::cos(a), std::sin(a)};
    c.x = center + c.R * c.nu;
    c.disk = SmoothSetDescriptor::disk(center, c.R);
    const double rho0 = 1.0 + 7.0 * U(rng);
    c.profile = make_trapezoid_profile(rho0, (0.1 + 0.8 * U(rng)) * rho0, 16);
    return c;
}

Mat2 random_symmetric(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> U(-scale, scale);
    return {U(rng), U(rng), U(rng)};
}

std::vector<CheckOutcome> hamiltonian_suite(const CheckOptions& opt) {
    const int trials = opt.trials > 0 ? opt.trials : 100;
    std::vector<CheckOutcome> out;
    out.push_back(run_property("hamiltonian: F_f equals |p| kappa_f on disks", trials, opt.seed + 3, [](auto& rng, int) {
        auto c = random_disk_config(rng);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double lambda = 0.1 + 9.9 * U(rng), mu = 10.0 * U(rng) - 5.0;
        // Superlevel sets of u = R - |y - center| are the concentric disks.
        const Vec2 p = -lambda * c.nu;
        const double k = -lambda / c.R;
        Mat2 X{k * (1 - c.nu.x * c.nu.x) + mu * c.nu.x * c.nu.x, -k * c.nu.x * c.nu.y + mu * c.nu.x * c.nu.y,
               k * (1 - c.nu.y * c.nu.y) + mu * c.nu.y * c.nu.y};
        const double F = hamiltonian_F_f({c.x, p, X, &c.disk}, c.profile);
        const auto kf = kappa_f(c.disk, c.x, c.profile);
        const double err = std::abs(F - lambda * kf.value);
        if (err > 1e-10) {
            std::ostringstream s;
            s << "|F - |p| kappa| = " << err;
            return s.str();
        }
        return std::string();
    }));
    out.push_back(run_property("hamiltonian: geometric scaling", trials, opt.seed + 4, [](auto& rng, int) {
        auto c = random_disk_config(rng);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const Vec2 x = c.x + (4.0 * U(rng) - 2.0) * c.nu;
        const Vec2 p{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0};
        if (p.norm() < 1e-3) return std::string();
        const Mat2 X = random_symmetric(rng, 2.0);
        const double lambda = 0.1 + 9.9 * U(rng), mu = 10.0 * U(rng) - 5.0;
        const Vec2 lp = lambda * p;
        const Mat2 Y{lambda * X.xx + mu * p.x * p.x, lambda * X.xy + mu * p.x * p.y, lambda * X.yy + mu * p.y * p.y};
        const double a = hamiltonian_F_f({x, lp, Y, &c.disk}, c.profile);
        const double b = lambda * hamiltonian_F_f({x, p, X, &c.disk}, c.profile);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
            std::ostringstream s;
            s << "F(lambda p, lambda X + mu p p) = " << a << ", lambda F = " << b;
            return s.str();
        }
        return std::string();
    }));
    out.push_back(run_property("hamiltonian: degenerate ellipticity", trials, opt.seed + 5, [](auto& rng, int) {
        auto c = random_disk_config(rng);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const Vec2 x = c.x + (4.0 * U(rng) - 2.0) * c.nu;
        const Vec2 p{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0};
        if (p.norm() < 1e-3) return std::string();
        const Mat2 X = random_symmetric(rng, 2.0);
        const Vec2 a{2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0};
        const Mat2 Y{X.xx + a.x * a.x, X.xy + a.x * a.y, X.yy + a.y * a.y};
        const double fx = hamiltonian_F_f({x, p, X, &c.disk}, c.profile);
        const double fy = hamiltonian_F_f({x, p, Y, &c.disk}, c.profile);
        if (fy > fx + 1e-12) {
            std::ostringstream s;
            s << "F(X + a a) = " << fy << " > F(X) = " << fx;
            return s.str();
        }
        return std::string();
    }));
    return out;
}

}  // namespace

const std::vector<std::string>& check_suites() {
    static const std::vector<std::string> names{"energy", "cut", "hamiltonian"};
    return names;
}

std::vector<CheckOutcome> run_check_suite(const std::string& suite, const CheckOptions& options) {
    if (!(options.quantum > 0.0) || !std::isfinite(options.quantum))
        return {{"configuration: capacity quantum", false, "quantum must be positive"}};
    if (suite == "energy") return energy_suite(options);
    if (suite == "cut") return cut_suite(options);
    if (suite == "hamiltonian") return hamiltonian_suite(options);
    throw Error(ErrorCode::invalid_argument, "unknown suite: " + suite);
}

}  // namespace oscflow
