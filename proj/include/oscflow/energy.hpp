#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oscflow/grid.hpp"
#include "oscflow/profile.hpp"

namespace oscflow {

enum class EnergyKind { osc_single, osc_profile, tv_baseline };

struct EnergyConfig {
    EnergyKind kind = EnergyKind::osc_single;
    double rho = 1.0;
    WeightProfile profile;

    static EnergyConfig osc(double rho);
    static EnergyConfig with_profile(WeightProfile profile);
    static EnergyConfig tv();
};

/// A ball (in cells) and the coefficient multiplying its window oscillations.
struct WeightedBall {
    DiscreteBall ball;
    double weight = 0.0;
};

/// The osc terms of an energy as (ball, coefficient) pairs. Radii are
/// lengths, so the ball radius in cells is rho / spacing and the
/// coefficient is spacing^2 / (2 rho), times the quadrature weight.
std::vector<WeightedBall> weighted_balls(const EnergyConfig& cfg, double spacing);

double osc_window(const ScalarField& field, std::span<const Cell> window);

/// Sum over all cells of the window oscillation, unscaled. Under pad
/// mode a window leaving the grid also sees the pad value.
double osc_sum(const ScalarField& field, const DiscreteBall& ball);

double energy_osc(const ScalarField& field, double rho);
double energy_profile(const ScalarField& field, const WeightProfile& profile);
double energy_tv(const ScalarField& field);
double energy(const ScalarField& field, const EnergyConfig& cfg);

/// Number of windows that see both a 0 and a 1.
std::int64_t mixed_window_count(const BinarySet& set, const DiscreteBall& ball);
double energy_osc_binary(const BinarySet& set, double rho);
double energy(const BinarySet& set, const EnergyConfig& cfg);

struct CoareaLevel {
    double threshold = 0.0;
    double gap = 0.0;  // distance between the quantization values around the threshold
    std::int64_t mixed_windows = 0;
    double energy = 0.0;  // energy of {u > threshold}
};

/// Superlevel decomposition over all distinct values of the field.
std::vector<CoareaLevel> coarea_decompose(const ScalarField& field, double rho);

/// Sum of gap * energy over the decomposition.
double coarea_total(std::span<const CoareaLevel> levels);

}  // namespace oscflow
