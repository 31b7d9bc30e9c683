#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace oscflow {

/// Integer cell coordinate: x is the column, y the row.
struct Cell {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
    friend Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
};

enum class BoundaryKind { clip, pad_constant };

/// How stencils that leave the grid are treated. `clip` drops the outside
/// cells; `pad_constant` treats them as carrying `pad_value`.
struct BoundaryMode {
    BoundaryKind kind = BoundaryKind::clip;
    double pad_value = 0.0;

    static BoundaryMode clip() { return {}; }
    static BoundaryMode pad(double value) { return {BoundaryKind::pad_constant, value}; }

    friend bool operator==(const BoundaryMode&, const BoundaryMode&) = default;
};

class Grid2D {
public:
    Grid2D(int width, int height, double spacing = 1.0, BoundaryMode boundary = {});

    int width() const { return width_; }
    int height() const { return height_; }
    double spacing() const { return spacing_; }
    const BoundaryMode& boundary() const { return boundary_; }
    std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

    bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    int index(Cell c) const { return c.y * width_ + c.x; }
    Cell cell(int index) const { return {index % width_, index / width_}; }

    Grid2D with_boundary(BoundaryMode boundary) const;

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    int width_;
    int height_;
    double spacing_;
    BoundaryMode boundary_;
};

/// Real-valued samples on a grid, row-major. Values are finite.
class ScalarField {
public:
    ScalarField(Grid2D grid, std::vector<double> values);
    ScalarField(Grid2D grid, double fill);

    const Grid2D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(Cell c) const { return values_[grid_.index(c)]; }
    double at(int x, int y) const { return at(Cell{x, y}); }

    double min() const;
    double max() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// A set E on the grid as a {0,1} mask, row-major.
class BinarySet {
public:
    BinarySet(Grid2D grid, std::vector<std::uint8_t> mask);
    explicit BinarySet(Grid2D grid);

    const Grid2D& grid() const { return grid_; }
    std::span<const std::uint8_t> mask() const { return mask_; }
    bool operator[](std::size_t i) const { return mask_[i] != 0; }
    bool at(Cell c) const { return mask_[grid_.index(c)] != 0; }
    bool at(int x, int y) const { return at(Cell{x, y}); }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool full() const { return count() == mask_.size(); }

    BinarySet complement() const;
    BinarySet united(const BinarySet& other) const;
    BinarySet intersected(const BinarySet& other) const;
    bool subset_of(const BinarySet& other) const;
    /// Integer translation; cells shifted in from outside are empty.
    BinarySet shifted(Cell offset) const;
    ScalarField to_field() const;

    friend bool operator==(const BinarySet&, const BinarySet&) = default;

private:
    Grid2D grid_;
    std::vector<std::uint8_t> mask_;
};

/// Lattice points of the closed disk of radius `radius` (in cells).
struct DiscreteBall {
    double radius = 0.0;
    std::vector<Cell> offsets;  // sorted by (y, x)

    /// Largest |dx| on the row dy, or -1 when the row is empty.
    int half_width(int dy) const;
    int reach() const { return static_cast<int>(radius); }
};

DiscreteBall make_discrete_ball(double rho);

/// Cells of (center + ball) inside the grid. Never empty for an interior center.
std::vector<Cell> window_at(const Grid2D& grid, Cell center, const DiscreteBall& ball);

/// True when (center + ball) sticks out of the grid.
bool window_leaves_grid(const Grid2D& grid, Cell center, const DiscreteBall& ball);

struct Quantization {
    std::vector<double> values;      // strictly increasing quantization values
    std::vector<double> thresholds;  // midpoints between consecutive values
};

/// Distinct values when there are at most `n_levels` of them, otherwise
/// `n_levels` uniform values across [min, max].
Quantization quantize(const ScalarField& field, int n_levels);

/// `n_levels` uniform values across [lo, hi].
Quantization quantize_range(double lo, double hi, int n_levels);

std::vector<double> quantize_levels(const ScalarField& field, int n_levels);

/// Replace each value by its nearest quantization value.
ScalarField apply_quantization(const ScalarField& field, const Quantization& q);

}  // namespace oscflow
