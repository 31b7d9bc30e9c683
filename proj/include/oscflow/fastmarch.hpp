#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "oscflow/grid.hpp"

namespace oscflow {

/// Signed distance samples: negative on {u <= 0}, positive elsewhere.
using SignedDistanceField = ScalarField;

/// Seeded distances next to the interface. `dist` holds unsigned values,
/// +inf where unset; `inside` records u <= 0 for every cell.
struct Band {
    Grid2D grid;
    std::vector<double> dist;
    std::vector<std::uint8_t> inside;

    std::size_t seeded() const;
};

constexpr double kUnset = std::numeric_limits<double>::infinity();

/// Sub-cell distances to the sign change along every grid edge where
/// (u <= 0) differs, by linear interpolation; minimum over the cell's edges.
Band init_band(const ScalarField& field);

/// Zero-distance seeds at the given cells; every cell counts as outside.
Band point_seeds(const Grid2D& grid, const std::vector<Cell>& cells);

/// First-order upwind Eikonal solve outward from the band (4-neighbour,
/// quadratic update, heap ordered by value then cell index). Unreached
/// cells and empty bands give +-cap, cap = grid diameter.
SignedDistanceField fast_march(const Band& band);

SignedDistanceField signed_distance(const ScalarField& field);
/// Interface at the midpoints between differing neighbours.
SignedDistanceField signed_distance(const BinarySet& set);

double distance_cap(const Grid2D& grid);

}  // namespace oscflow
