#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oscflow/checks.hpp"
#include "oscflow/error.hpp"
#include "oscflow/experiments.hpp"
#include "oscflow/fastmarch.hpp"
#include "oscflow/oracle.hpp"
#include "oscflow/pgm.hpp"
#include "oscflow/scheme.hpp"

namespace fs = std::filesystem;
using namespace oscflow;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitImage = 2;
constexpr int kExitParam = 3;
constexpr int kExitUndefined = 4;

struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw ParamError(message);
}

std::string num(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(10);
    s << v;
    return s.str();
}

std::string frame_name(const std::string& stem, int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%05d.pgm", stem.c_str(), k);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out << text;
}

struct EvolveArgs {
    std::string input, output = "out", energy = "osc", mode = "function", selection = "minimal";
    double rho = 4.0, rho0 = 6.0, delta_inner = 2.0, h = 4.0, level_band = 1.5;
    int n_quad = 4, steps = 20, n_levels = 12, emit_every = 1, redistance_every = 1;
    std::uint64_t seed = 1;
};

StepConfig step_config(const EvolveArgs& a) {
    require(a.h > 0.0 && std::isfinite(a.h), "--h must be positive");
    require(a.steps >= 0, "--steps must be nonnegative");
    require(a.n_levels >= 2, "--n-levels must be at least 2");
    require(a.emit_every >= 1, "--emit-every must be at least 1");
    require(a.redistance_every >= 1, "--redistance-every must be at least 1");
    require(a.level_band >= 0.0, "--level-band must be nonnegative");
    StepConfig cfg;
    cfg.h = a.h;
    cfg.n_levels = a.n_levels;
    if (a.level_band > 0.0) cfg.level_band = a.level_band;
    cfg.selection = a.selection == "maximal" ? Selection::maximal : Selection::minimal;
    if (a.energy == "osc") {
        require(a.rho >= 1.0, "--rho must be at least one cell");
        cfg.energy = EnergyConfig::osc(a.rho);
    } else if (a.energy == "profile") {
        require(a.rho0 >= 1.0 && a.delta_inner > 0.0 && a.delta_inner <= a.rho0, "need 0 < delta-inner <= rho0, rho0 >= 1");
        require(a.n_quad >= 1, "--n-quad must be positive");
        cfg.energy = EnergyConfig::with_profile(make_trapezoid_profile(a.rho0, a.delta_inner, a.n_quad));
    } else {
        cfg.energy = EnergyConfig::tv();
    }
    return cfg;
}

int cmd_evolve(const EvolveArgs& a) {
    const StepConfig cfg = step_config(a);
    const BinarySet E0 = image_to_set(read_pgm(a.input));
    fs::create_directories(a.output);

    FlowOptions options;
    options.n_steps = a.steps;
    options.redistance_every = a.redistance_every;
    const FlowTrajectory tr = a.mode == "set" ? flow(E0, cfg, options) : flow(signed_distance(E0), cfg, options);

    for (std::size_t k = 0; k < tr.sets.size(); ++k)
        if (k % static_cast<std::size_t>(a.emit_every) == 0)
            write_pgm((fs::path(a.output) / frame_name("frame", static_cast<int>(k))).string(), set_to_image(tr.sets[k]));

    std::string csv = "step,time,energy,area,radius,sup_change\n";
    for (const auto& d : tr.diagnostics) {
        if (d.step == 0) continue;
        csv += std::to_string(d.step) + "," + num(d.time) + "," + num(d.energy) + "," + num(d.area) + "," +
               num(d.radius) + "," + num(d.sup_change) + "\n";
    }
    write_text(fs::path(a.output) / "diag.csv", csv);

    std::ostringstream m;
    m << "command=evolve\ninput=" << a.input << "\noutput=" << a.output << "\nenergy=" << a.energy
      << "\nmode=" << a.mode << "\nselection=" << a.selection << "\nrho=" << num(a.rho) << "\nrho0=" << num(a.rho0)
      << "\ndelta_inner=" << num(a.delta_inner) << "\nn_quad=" << a.n_quad << "\nh=" << num(a.h)
      << "\nsteps=" << a.steps << "\nn_levels=" << a.n_levels << "\nlevel_band=" << num(a.level_band)
      << "\nemit_every=" << a.emit_every << "\nredistance_every=" << a.redistance_every << "\nseed=" << a.seed
      << "\nextinction_step=" << (tr.extinction_step ? std::to_string(*tr.extinction_step) : "none") << "\n";
    write_text(fs::path(a.output) / "manifest.txt", m.str());
    std::cout << "wrote " << tr.sets.size() << " steps to " << a.output << "\n";
    return 0;
}

struct BallArgs {
    std::string output = "out";
    int size = 128, steps = 30, n_quad = 4, n_levels = 12;
    double radius = 24.0, rho0 = 6.0, delta_inner = 2.0, h = 4.0, tolerance = 2.0, level_band = 1.5;
};

int cmd_ball(const BallArgs& a) {
    require(a.size >= 2, "--size must be at least 2");
    require(a.radius > 0.0, "--radius must be positive");
    require(a.h > 0.0, "--h must be positive");
    require(a.steps >= 0, "--steps must be nonnegative");
    require(a.n_levels >= 2, "--n-levels must be at least 2");
    require(a.level_band > 0.0, "--level-band must be positive");
    require(a.tolerance >= 0.0, "--tolerance must be nonnegative");
    require(a.rho0 >= 1.0 && a.delta_inner > 0.0 && a.delta_inner <= a.rho0, "need 0 < delta-inner <= rho0, rho0 >= 1");
    require(a.n_quad >= 1, "--n-quad must be positive");
    fs::create_directories(a.output);
    const std::string header = "step,time,r_discrete_minus,r_discrete_plus,r_ode\n";
    if (a.radius < 1.0) {
        write_text(fs::path(a.output) / "ball.csv", header + "0,0,0,0,0\n");
        std::cout << "note: radius below one cell, extinct at once\n";
        return 0;
    }
    BallExperimentConfig cfg;
    cfg.size = a.size;
    cfg.radius = a.radius;
    cfg.profile = make_trapezoid_profile(a.rho0, a.delta_inner, a.n_quad);
    cfg.h = a.h;
    cfg.steps = a.steps;
    cfg.n_levels = a.n_levels;
    cfg.level_band = a.level_band;
    const auto res = run_ball_experiment(cfg);
    std::string csv = header;
    for (std::size_t k = 0; k < res.time.size(); ++k)
        csv += std::to_string(k) + "," + num(res.time[k]) + "," + num(res.r_minus[k]) + "," + num(res.r_plus[k]) + "," +
               num(res.r_ode[k]) + "\n";
    write_text(fs::path(a.output) / "ball.csv", csv);
    std::cout << "max deviation " << num(res.max_deviation) << " (tolerance " << num(a.tolerance) << ")\n";
    return res.max_deviation <= a.tolerance ? 0 : kExitFail;
}

struct CompareArgs {
    std::string input, output = "out";
    int size = 256, period = 6, steps = 30;
    double rho = 8.0, h = 2.0;
};

GrayImage side_by_side(const BinarySet& left, const BinarySet& right) {
    const GrayImage a = set_to_image(left), b = set_to_image(right);
    GrayImage out{a.width + b.width, a.height, 255, {}};
    out.pixels.reserve(static_cast<std::size_t>(out.width) * out.height);
    for (int y = 0; y < a.height; ++y) {
        out.pixels.insert(out.pixels.end(), a.pixels.begin() + y * a.width, a.pixels.begin() + (y + 1) * a.width);
        out.pixels.insert(out.pixels.end(), b.pixels.begin() + y * b.width, b.pixels.begin() + (y + 1) * b.width);
    }
    return out;
}

int cmd_compare(const CompareArgs& a) {
    require(a.rho >= 1.0, "--rho must be at least one cell");
    require(a.h > 0.0, "--h must be positive");
    require(a.steps >= 1, "--steps must be positive");
    require(a.size >= 2 && a.period >= 2, "need --size >= 2 and --period >= 2");
    BinarySet E0 = a.input.empty() ? stripe_pattern(Grid2D(a.size, a.size), a.period, a.size / 4)
                                   : image_to_set(read_pgm(a.input));
    if (E0.empty()) {
        std::cout << "survival ratio undefined: no components\n";
        return kExitUndefined;
    }
    fs::create_directories(a.output);
    const auto cmp = compare_flows(E0, a.rho, a.h, a.steps);
    for (int k = 0; k <= a.steps; ++k)
        write_pgm((fs::path(a.output) / frame_name("compare", k)).string(), side_by_side(cmp.osc.sets[k], cmp.tv.sets[k]));
    std::string csv = "component,osc_survival,tv_survival\n";
    for (std::size_t i = 0; i < cmp.osc_survival.size(); ++i)
        csv += std::to_string(i) + "," + std::to_string(cmp.osc_survival[i]) + "," + std::to_string(cmp.tv_survival[i]) + "\n";
    write_text(fs::path(a.output) / "survival.csv", csv);
    std::cout << "survival ratio " << num(cmp.ratio) << "\n";
    return 0;
}

struct CheckArgs {
    std::string suite;
    std::uint64_t seed = 1;
    double quantum = CutOptions{}.quantum;
    int trials = 0;
};

int cmd_check(const CheckArgs& a) {
    std::vector<std::string> suites = check_suites();
    if (!a.suite.empty()) {
        require(std::find(suites.begin(), suites.end(), a.suite) != suites.end(), "unknown suite: " + a.suite);
        suites = {a.suite};
    }
    CheckOptions options{a.seed, a.quantum, a.trials};
    std::cout << "TAP version 13\n";
    int n = 0;
    for (const auto& s : suites) {
        for (const auto& o : run_check_suite(s, options)) {
            ++n;
            std::cout << (o.ok ? "ok " : "not ok ") << n << " - " << o.name << " # " << o.detail << "\n";
            if (!o.ok) {
                std::cout << "Bail out! " << o.name << "\n";
                return kExitFail;
            }
        }
    }
    std::cout << "1.." << n << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillation-energy curvature flows by graph cuts"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help and exit");

    EvolveArgs ev;
    auto* evolve = app.add_subcommand("evolve", "Run a flow from a PGM image");
    evolve->set_help_flag("--help", "Print this help and exit");
    evolve->add_option("--input", ev.input, "Input PGM (dark pixels are inside)")->required();
    evolve->add_option("--output", ev.output, "Output directory");
    evolve->add_option("--energy", ev.energy)->check(CLI::IsMember({"osc", "profile", "tv"}));
    evolve->add_option("--mode", ev.mode)->check(CLI::IsMember({"set", "function"}));
    evolve->add_option("--selection", ev.selection)->check(CLI::IsMember({"minimal", "maximal"}));
    evolve->add_option("--rho", ev.rho);
    evolve->add_option("--rho0", ev.rho0);
    evolve->add_option("--delta-inner", ev.delta_inner);
    evolve->add_option("--n-quad", ev.n_quad);
    evolve->add_option("--h", ev.h);
    evolve->add_option("--steps", ev.steps);
    evolve->add_option("--n-levels", ev.n_levels);
    evolve->add_option("--level-band", ev.level_band, "Half-width of the level window; 0 uses the field range");
    evolve->add_option("--emit-every", ev.emit_every);
    evolve->add_option("--redistance-every", ev.redistance_every);
    evolve->add_option("--seed", ev.seed);

    BallArgs ba;
    auto* ball = app.add_subcommand("ball", "Disk flow against the ball ODE");
    ball->set_help_flag("--help", "Print this help and exit");
    ball->add_option("--output", ba.output);
    ball->add_option("--size", ba.size);
    ball->add_option("--radius", ba.radius);
    ball->add_option("--rho0", ba.rho0);
    ball->add_option("--delta-inner", ba.delta_inner);
    ball->add_option("--n-quad", ba.n_quad);
    ball->add_option("--h", ba.h);
    ball->add_option("--steps", ba.steps);
    ball->add_option("--n-levels", ba.n_levels);
    ball->add_option("--level-band", ba.level_band);
    ball->add_option("--tolerance", ba.tolerance, "Allowed deviation in cells");

    CompareArgs ca;
    auto* compare = app.add_subcommand("compare", "Oscillation flow against the perimeter flow");
    compare->set_help_flag("--help", "Print this help and exit");
    compare->add_option("--input", ca.input, "Input PGM; synthetic stripes when absent");
    compare->add_option("--output", ca.output);
    compare->add_option("--size", ca.size);
    compare->add_option("--period", ca.period);
    compare->add_option("--rho", ca.rho);
    compare->add_option("--h", ca.h);
    compare->add_option("--steps", ca.steps);

    CheckArgs ch;
    auto* check = app.add_subcommand("check", "Run the invariant suites");
    check->set_help_flag("--help", "Print this help and exit");
    check->add_option("--suite", ch.suite, "energy, cut or hamiltonian");
    check->add_option("--seed", ch.seed);
    check->add_option("--quantum", ch.quantum, "Capacity quantum");
    check->add_option("--trials", ch.trials);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParam;
    }

    try {
        if (*evolve) return cmd_evolve(ev);
        if (*ball) return cmd_ball(ba);
        if (*compare) return cmd_compare(ca);
        return cmd_check(ch);
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == ErrorCode::io) return kExitImage;
        if (e.code() == ErrorCode::internal) return kExitFail;
        return kExitParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
