#include "oscflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscflow/error.hpp"
#include "oscflow/oracle.hpp"

namespace oscflow {

BallExperiment run_ball_experiment(const BallExperimentConfig& cfg) {
    if (cfg.size < 2 || !(cfg.radius > 0.0)) throw Error(ErrorCode::invalid_argument, "need size >= 2 and radius > 0");
    Grid2D g(cfg.size, cfg.size);
    const double c = 0.5 * (cfg.size - 1);
    std::vector<double> v(g.size());
    for (int y = 0; y < cfg.size; ++y)
        for (int x = 0; x < cfg.size; ++x) v[g.index({x, y})] = std::hypot(x - c, y - c) - cfg.radius;
    const ScalarField u0(g, std::move(v));

    StepConfig step;
    step.h = cfg.h;
    step.energy = EnergyConfig::with_profile(cfg.profile);
    step.n_levels = cfg.n_levels;
    step.level_band = cfg.level_band;
    FlowOptions options;
    options.n_steps = cfg.steps;
    options.keep_frames = false;

    BallExperiment out;
    // The inside set is {u <= 0}, the complement of the cut sets, so the
    // minimal inside set comes from the maximal superlevel cuts.
    step.selection = Selection::maximal;
    const auto minus = flow(u0, step, options);
    for (const auto& d : minus.diagnostics) {
        out.time.push_back(d.time);
        out.r_minus.push_back(d.radius);
    }
    if (!cfg.minus_only) {
        step.selection = Selection::minimal;
        const auto plus = flow(u0, step, options);
        for (const auto& d : plus.diagnostics) out.r_plus.push_back(d.radius);
        out.r_plus.resize(out.r_minus.size(), 0.0);
    }

    const auto ode = ball_ode_integrate({cfg.radius, cfg.profile, 2, 1e-3});
    out.extinction_time = ode.extinction_time;
    for (std::size_t k = 0; k < out.time.size(); ++k) {
        const double r = ode.radius_at(out.time[k]);
        out.r_ode.push_back(r);
        if (out.time[k] > 0.8 * ode.extinction_time) continue;
        out.max_deviation = std::max(out.max_deviation, std::abs(out.r_minus[k] - r));
        if (!cfg.minus_only) out.max_deviation = std::max(out.max_deviation, std::abs(out.r_plus[k] - r));
    }
    return out;
}

BinarySet stripe_pattern(const Grid2D& grid, int period, int margin) {
    if (period < 2) throw Error(ErrorCode::invalid_argument, "stripe period must be at least 2");
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int y = margin; y < grid.height() - margin; ++y)
        for (int x = margin; x < grid.width() - margin; ++x)
            mask[grid.index({x, y})] = (x - margin) % period < period / 2 ? 1 : 0;
    return {grid, std::move(mask)};
}

std::vector<BinarySet> connected_components(const BinarySet& set) {
    const Grid2D& g = set.grid();
    std::vector<int> label(g.size(), -1);
    std::vector<BinarySet> out;
    std::vector<int> stack;
    for (std::size_t start = 0; start < g.size(); ++start) {
        if (!set[start] || label[start] >= 0) continue;
        const int id = static_cast<int>(out.size());
        std::vector<std::uint8_t> mask(g.size(), 0);
        stack.assign(1, static_cast<int>(start));
        label[start] = id;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            mask[i] = 1;
            const Cell c = g.cell(i);
            const Cell nb[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
            for (const Cell& n : nb) {
                if (!g.contains(n)) continue;
                const int j = g.index(n);
                if (set[j] && label[j] < 0) {
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
        out.emplace_back(g, std::move(mask));
    }
    return out;
}

std::vector<int> component_survival(const std::vector<BinarySet>& components, const std::vector<BinarySet>& frames) {
    if (frames.empty()) throw Error(ErrorCode::invalid_argument, "no frames");
    const Grid2D& g = frames.front().grid();
    std::vector<int> out;
    for (const auto& comp : components) {
        std::vector<int> cells, ring;
        for (int y = 0; y < g.height(); ++y)
            for (int x = 0; x < g.width(); ++x) {
                const int i = g.index({x, y});
                if (comp[i]) {
                    cells.push_back(i);
                    continue;
                }
                if (frames.front()[i]) continue;
                const Cell nb[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
                for (const Cell& n : nb)
                    if (g.contains(n) && comp.at(n)) {
                        ring.push_back(i);
                        break;
                    }
            }
        int life = static_cast<int>(frames.size());
        for (std::size_t k = 0; k < frames.size(); ++k) {
            std::size_t in = 0, out_ring = 0;
            for (int i : cells) in += frames[k][i] ? 1 : 0;
            for (int i : ring) out_ring += frames[k][i] ? 0 : 1;
            if (2 * in < cells.size() || 2 * out_ring < ring.size()) {
                life = static_cast<int>(k);
                break;
            }
        }
        out.push_back(life);
    }
    return out;
}

double median(std::vector<int> values) {
    if (values.empty()) throw Error(ErrorCode::domain, "median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

FlowComparison compare_flows(const BinarySet& E0, double rho, double h, int steps) {
    const auto components = connected_components(E0);
    if (components.empty()) throw Error(ErrorCode::domain, "the input has no components");
    FlowOptions options;
    options.n_steps = steps;
    StepConfig cfg;
    cfg.h = h;
    cfg.energy = EnergyConfig::osc(rho);
    FlowComparison out;
    out.osc = flow(E0, cfg, options);
    cfg.energy = EnergyConfig::tv();
    out.tv = flow(E0, cfg, options);
    // Extinct runs stop early; pad them with their last (empty) set.
    for (auto* tr : {&out.osc, &out.tv})
        while (static_cast<int>(tr->sets.size()) < steps + 1) tr->sets.push_back(tr->sets.back());
    out.osc_survival = component_survival(components, out.osc.sets);
    out.tv_survival = component_survival(components, out.tv.sets);
    const double m_tv = median(out.tv_survival);
    out.ratio = m_tv > 0.0 ? median(out.osc_survival) / m_tv : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace oscflow
