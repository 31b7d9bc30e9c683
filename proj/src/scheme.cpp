#include "oscflow/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscflow/error.hpp"
#include "oscflow/fastmarch.hpp"

namespace oscflow {

namespace {

void validate(const StepConfig& cfg) {
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
    if (cfg.n_levels < 2) throw Error(ErrorCode::invalid_argument, "need at least two levels");
    if (cfg.level_band && !(*cfg.level_band > 0.0)) throw Error(ErrorCode::invalid_argument, "level band must be positive");
}

Grid2D with_pad_label(const Grid2D& g, int label) {
    return g.with_boundary(BoundaryMode::pad(static_cast<double>(label)));
}

}  // namespace

Stepper::Stepper(const Grid2D& grid, StepConfig cfg) : grid_(grid), cfg_(std::move(cfg)) { validate(cfg_); }

CutSolution Stepper::solve(std::span<const double> unary, int pad_label) {
    const bool pad = grid_.boundary().kind == BoundaryKind::pad_constant;
    const int slot = pad ? pad_label : 0;
    if (!sessions_[slot]) {
        Grid2D g = pad ? with_pad_label(grid_, pad_label) : grid_;
        models_[slot] = std::make_unique<CutModel>(make_cut_model(g, cfg_.energy, cfg_.cut));
        sessions_[slot] = std::make_unique<CutSession>(*models_[slot]);
    }
    return sessions_[slot]->solve(unary);
}

SetStep Stepper::step_set(const BinarySet& E) {
    if (E.grid().width() != grid_.width() || E.grid().height() != grid_.height())
        throw Error(ErrorCode::invalid_argument, "set does not match the stepper grid");
    if (E.empty() || E.full()) return {E, E, true, 0.0};
    int pad_label = 0;
    if (grid_.boundary().kind == BoundaryKind::pad_constant) {
        const double pv = grid_.boundary().pad_value;
        if (pv != 0.0 && pv != 1.0) throw Error(ErrorCode::invalid_argument, "set steps need a pad value of 0 or 1");
        pad_label = static_cast<int>(pv);
    }
    const auto d = signed_distance(E);
    const double scale = grid_.spacing() * grid_.spacing() / cfg_.h;
    std::vector<double> unary(d.values().begin(), d.values().end());
    for (double& v : unary) v *= scale;
    auto sol = solve(unary, pad_label);
    return {std::move(sol.min_labeling), std::move(sol.max_labeling), false, sol.energy};
}

FunctionStep Stepper::step_function(const ScalarField& u, bool keep_levels) {
    const Grid2D& g = u.grid();
    if (g.width() != grid_.width() || g.height() != grid_.height())
        throw Error(ErrorCode::invalid_argument, "field does not match the stepper grid");
    const Quantization q = cfg_.level_band ? quantize_range(-*cfg_.level_band, *cfg_.level_band, cfg_.n_levels)
                                           : quantize(u, cfg_.n_levels);
    FunctionStep out{u, {}, q.thresholds};
    if (q.values.size() < 2) return out;

    const bool pad = grid_.boundary().kind == BoundaryKind::pad_constant;
    const double scale = grid_.spacing() * grid_.spacing() / cfg_.h;
    const std::size_t n = g.size();
    std::vector<int> count(n, 0);
    std::vector<double> unary(n);
    std::optional<BinarySet> previous;
    for (double t : q.thresholds) {
        for (std::size_t i = 0; i < n; ++i) unary[i] = (t - u[i]) * scale;
        const int pad_label = pad && grid_.boundary().pad_value > t ? 1 : 0;
        auto sol = solve(unary, pad_label);
        BinarySet& F = cfg_.selection == Selection::minimal ? sol.min_labeling : sol.max_labeling;
        if (previous && !F.subset_of(*previous)) throw Error(ErrorCode::internal, "level sets are not nested");
        for (std::size_t i = 0; i < n; ++i) count[i] += F[i] ? 1 : 0;
        if (keep_levels) out.levels.push_back(F);
        previous = std::move(F);
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = q.values[static_cast<std::size_t>(count[i])];
    out.u = ScalarField(g, std::move(values));
    return out;
}

SetStep evolve_set_once(const BinarySet& E, const StepConfig& cfg) {
    Stepper stepper(E.grid(), cfg);
    return stepper.step_set(E);
}

ScalarField evolve_function_once(const ScalarField& u, const StepConfig& cfg) {
    Stepper stepper(u.grid(), cfg);
    return stepper.step_function(u).u;
}

ScalarField evolve_tv_once(const ScalarField& u, double h, int n_levels) {
    StepConfig cfg;
    cfg.h = h;
    cfg.energy = EnergyConfig::tv();
    cfg.n_levels = n_levels;
    return evolve_function_once(u, cfg);
}

BinarySet inside_set(const ScalarField& u) {
    std::vector<std::uint8_t> mask(u.values().size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = u[i] <= 0.0 ? 1 : 0;
    return BinarySet(u.grid(), std::move(mask));
}

double smoothed_area(const ScalarField& u) {
    const double h = u.grid().spacing();
    double a = 0.0;
    for (double v : u.values()) a += std::clamp(0.5 - v / h, 0.0, 1.0);
    return a * h * h;
}

std::size_t boundary_cell_count(const BinarySet& set) {
    const Grid2D& g = set.grid();
    std::size_t count = 0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            if (!set.at({x, y})) continue;
            const Cell nb[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            for (const Cell& c : nb)
                if (g.contains(c) && !set.at(c)) {
                    ++count;
                    break;
                }
        }
    return count;
}

namespace {

double sup_difference(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

StepDiagnostics diagnose(int step, double time, const BinarySet& inside, double area, const EnergyConfig& energy_cfg) {
    StepDiagnostics d;
    d.step = step;
    d.time = time;
    d.energy = energy(inside, energy_cfg);
    d.area = area;
    d.radius = std::sqrt(area / std::numbers::pi);
    d.boundary_cells = boundary_cell_count(inside);
    return d;
}

void check_options(const FlowOptions& options) {
    if (options.n_steps < 0) throw Error(ErrorCode::invalid_argument, "step count must be nonnegative");
    if (options.redistance_every < 1) throw Error(ErrorCode::invalid_argument, "redistance interval must be at least 1");
}

}  // namespace

FlowTrajectory flow(const ScalarField& u0, const StepConfig& cfg, const FlowOptions& options) {
    check_options(options);
    Stepper stepper(u0.grid(), cfg);
    FlowTrajectory tr;
    ScalarField u = u0;
    BinarySet inside = inside_set(u);
    ScalarField sd = signed_distance(u);
    auto record = [&](int step, const ScalarField& field, double sup_change) {
        const double t = step * cfg.h;
        tr.times.push_back(t);
        auto d = diagnose(step, t, inside, smoothed_area(sd), cfg.energy);
        d.sup_change = sup_change;
        tr.diagnostics.push_back(d);
        if (options.keep_frames) {
            tr.fields.push_back(field);
            tr.sets.push_back(inside);
        }
    };
    record(0, u, 0.0);
    if (inside.empty()) tr.extinction_step = 0;
    for (int n = 1; n <= options.n_steps && !tr.extinction_step; ++n) {
        if ((n - 1) % options.redistance_every == 0) u = sd;
        u = stepper.step_function(u).u;
        inside = inside_set(u);
        ScalarField sd_new = signed_distance(u);
        const double change = sup_difference(sd_new, sd);
        sd = std::move(sd_new);
        record(n, u, change);
        if (inside.empty()) tr.extinction_step = n;
    }
    return tr;
}

FlowTrajectory flow(const BinarySet& E0, const StepConfig& cfg, const FlowOptions& options) {
    check_options(options);
    Stepper stepper(E0.grid(), cfg);
    FlowTrajectory tr;
    BinarySet E = E0;
    ScalarField sd = signed_distance(E);
    const double cell_area = E0.grid().spacing() * E0.grid().spacing();
    auto record = [&](int step, double sup_change) {
        const double t = step * cfg.h;
        tr.times.push_back(t);
        auto d = diagnose(step, t, E, static_cast<double>(E.count()) * cell_area, cfg.energy);
        d.sup_change = sup_change;
        tr.diagnostics.push_back(d);
        if (options.keep_frames) {
            tr.fields.push_back(sd);
            tr.sets.push_back(E);
        }
    };
    record(0, 0.0);
    if (E.empty()) tr.extinction_step = 0;
    for (int n = 1; n <= options.n_steps && !tr.extinction_step; ++n) {
        auto step = stepper.step_set(E);
        E = cfg.selection == Selection::minimal ? std::move(step.minus) : std::move(step.plus);
        ScalarField sd_new = signed_distance(E);
        const double change = sup_difference(sd_new, sd);
        sd = std::move(sd_new);
        record(n, change);
        if (E.empty()) tr.extinction_step = n;
    }
    return tr;
}

}  // namespace oscflow
