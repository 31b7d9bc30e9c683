#include "oscflow/energy.hpp"

#include <algorithm>
#include <cmath>

#include "oscflow/error.hpp"

namespace oscflow {

EnergyConfig EnergyConfig::osc(double rho) {
    EnergyConfig c;
    c.kind = EnergyKind::osc_single;
    c.rho = rho;
    return c;
}

EnergyConfig EnergyConfig::with_profile(WeightProfile profile) {
    EnergyConfig c;
    c.kind = EnergyKind::osc_profile;
    c.rho = profile.rho0;
    c.profile = std::move(profile);
    return c;
}

EnergyConfig EnergyConfig::tv() {
    EnergyConfig c;
    c.kind = EnergyKind::tv_baseline;
    return c;
}

std::vector<WeightedBall> weighted_balls(const EnergyConfig& cfg, double spacing) {
    std::vector<WeightedBall> out;
    auto add = [&](double rho, double w) {
        if (!(w > 0.0)) return;
        out.push_back({make_discrete_ball(rho / spacing), w * spacing * spacing / (2.0 * rho)});
    };
    switch (cfg.kind) {
        case EnergyKind::osc_single:
            add(cfg.rho, 1.0);
            break;
        case EnergyKind::osc_profile:
            if (cfg.profile.quadrature.empty()) throw Error(ErrorCode::invalid_energy, "profile has no quadrature");
            for (const auto& q : cfg.profile.quadrature) add(q.s, q.w);
            break;
        case EnergyKind::tv_baseline:
            throw Error(ErrorCode::invalid_energy, "TV energy has no oscillation windows");
    }
    return out;
}

double osc_window(const ScalarField& field, std::span<const Cell> window) {
    if (window.empty()) return 0.0;
    double lo = field.at(window[0]), hi = lo;
    for (const auto& c : window) {
        double v = field.at(c);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double osc_sum(const ScalarField& field, const DiscreteBall& ball) {
    const Grid2D& g = field.grid();
    const bool pad = g.boundary().kind == BoundaryKind::pad_constant;
    const double pv = g.boundary().pad_value;
    double total = 0.0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            double lo = field.at(x, y), hi = lo;
            bool outside = false;
            for (const auto& o : ball.offsets) {
                Cell c{x + o.x, y + o.y};
                if (!g.contains(c)) {
                    outside = true;
                    continue;
                }
                double v = field.at(c);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (pad && outside) {
                lo = std::min(lo, pv);
                hi = std::max(hi, pv);
            }
            total += hi - lo;
        }
    return total;
}

double energy_osc(const ScalarField& field, double rho) {
    double h = field.grid().spacing();
    auto ball = make_discrete_ball(rho / h);
    return osc_sum(field, ball) * h * h / (2.0 * rho);
}

double energy_profile(const ScalarField& field, const WeightProfile& profile) {
    double total = 0.0;
    for (const auto& q : profile.quadrature)
        if (q.w > 0.0) total += q.w * energy_osc(field, q.s);
    return total;
}

double energy_tv(const ScalarField& field) {
    const Grid2D& g = field.grid();
    const bool pad = g.boundary().kind == BoundaryKind::pad_constant;
    const double pv = g.boundary().pad_value;
    double total = 0.0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            double u = field.at(x, y);
            double ux = x + 1 < g.width() ? field.at(x + 1, y) - u : (pad ? pv - u : 0.0);
            double uy = y + 1 < g.height() ? field.at(x, y + 1) - u : (pad ? pv - u : 0.0);
            total += std::sqrt(ux * ux + uy * uy);
        }
    return total * g.spacing();
}

double energy(const ScalarField& field, const EnergyConfig& cfg) {
    switch (cfg.kind) {
        case EnergyKind::osc_single: return energy_osc(field, cfg.rho);
        case EnergyKind::osc_profile: return energy_profile(field, cfg.profile);
        case EnergyKind::tv_baseline: return energy_tv(field);
    }
    return 0.0;
}

std::int64_t mixed_window_count(const BinarySet& set, const DiscreteBall& ball) {
    const Grid2D& g = set.grid();
    const bool pad = g.boundary().kind == BoundaryKind::pad_constant;
    if (pad && g.boundary().pad_value != 0.0 && g.boundary().pad_value != 1.0)
        throw Error(ErrorCode::invalid_argument, "binary energies need a pad value of 0 or 1");
    const int pv = static_cast<int>(g.boundary().pad_value);
    std::int64_t count = 0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            bool seen[2] = {false, false};
            for (const auto& o : ball.offsets) {
                Cell c{x + o.x, y + o.y};
                if (g.contains(c)) {
                    seen[set.at(c) ? 1 : 0] = true;
                } else if (pad) {
                    seen[pv] = true;
                }
                if (seen[0] && seen[1]) break;
            }
            count += seen[0] && seen[1];
        }
    return count;
}

double energy_osc_binary(const BinarySet& set, double rho) {
    double h = set.grid().spacing();
    auto ball = make_discrete_ball(rho / h);
    return static_cast<double>(mixed_window_count(set, ball)) * h * h / (2.0 * rho);
}

double energy(const BinarySet& set, const EnergyConfig& cfg) {
    if (cfg.kind == EnergyKind::tv_baseline) return energy_tv(set.to_field());
    double total = 0.0;
    for (const auto& wb : weighted_balls(cfg, set.grid().spacing()))
        total += wb.weight * static_cast<double>(mixed_window_count(set, wb.ball));
    return total;
}

std::vector<CoareaLevel> coarea_decompose(const ScalarField& field, double rho) {
    const double h = field.grid().spacing();
    auto ball = make_discrete_ball(rho / h);
    Grid2D g = field.grid();
    const bool pad = g.boundary().kind == BoundaryKind::pad_constant;
    std::vector<double> distinct(field.values().begin(), field.values().end());
    if (pad) distinct.push_back(g.boundary().pad_value);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<CoareaLevel> out;
    for (std::size_t k = 1; k < distinct.size(); ++k) {
        CoareaLevel lvl;
        lvl.threshold = 0.5 * (distinct[k - 1] + distinct[k]);
        lvl.gap = distinct[k] - distinct[k - 1];
        std::vector<std::uint8_t> mask(field.values().size());
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = field[i] > lvl.threshold;
        // The pad value is a field value too; its superlevel indicator is 0 or 1.
        Grid2D lg = pad ? g.with_boundary(BoundaryMode::pad(g.boundary().pad_value > lvl.threshold ? 1.0 : 0.0)) : g;
        BinarySet set(lg, std::move(mask));
        lvl.mixed_windows = mixed_window_count(set, ball);
        lvl.energy = static_cast<double>(lvl.mixed_windows) * h * h / (2.0 * rho);
        out.push_back(lvl);
    }
    return out;
}

double coarea_total(std::span<const CoareaLevel> levels) {
    double total = 0.0;
    for (const auto& l : levels) total += l.gap * l.energy;
    return total;
}

}  // namespace oscflow
