#include "oscflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "oscflow/error.hpp"

namespace oscflow {

Grid2D::Grid2D(int width, int height, double spacing, BoundaryMode boundary)
    : width_(width), height_(height), spacing_(spacing), boundary_(boundary) {
    if (width < 1 || height < 1)
        throw Error(ErrorCode::invalid_argument, "grid dimensions must be at least 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw Error(ErrorCode::invalid_argument, "grid spacing must be positive");
    if (!std::isfinite(boundary.pad_value))
        throw Error(ErrorCode::invalid_argument, "pad value must be finite");
}

Grid2D Grid2D::with_boundary(BoundaryMode boundary) const {
    return Grid2D(width_, height_, spacing_, boundary);
}

ScalarField::ScalarField(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw Error(ErrorCode::invalid_argument, "value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "field values must be finite");
}

ScalarField::ScalarField(Grid2D grid, double fill) : ScalarField(grid, std::vector<double>(grid.size(), fill)) {}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

BinarySet::BinarySet(Grid2D grid, std::vector<std::uint8_t> mask) : grid_(grid), mask_(std::move(mask)) {
    if (mask_.size() != grid_.size())
        throw Error(ErrorCode::invalid_argument, "mask size does not match grid");
    for (auto m : mask_)
        if (m > 1) throw Error(ErrorCode::invalid_argument, "mask values must be 0 or 1");
}

BinarySet::BinarySet(Grid2D grid) : grid_(grid), mask_(grid.size(), 0) {}

std::size_t BinarySet::count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

BinarySet BinarySet::complement() const {
    auto m = mask_;
    for (auto& v : m) v = static_cast<std::uint8_t>(1 - v);
    return {grid_, std::move(m)};
}

BinarySet BinarySet::united(const BinarySet& other) const {
    if (!(other.grid_ == grid_)) throw Error(ErrorCode::invalid_argument, "grid mismatch");
    auto m = mask_;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] |= other.mask_[i];
    return {grid_, std::move(m)};
}

BinarySet BinarySet::intersected(const BinarySet& other) const {
    if (!(other.grid_ == grid_)) throw Error(ErrorCode::invalid_argument, "grid mismatch");
    auto m = mask_;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] &= other.mask_[i];
    return {grid_, std::move(m)};
}

bool BinarySet::subset_of(const BinarySet& other) const {
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i] && !other.mask_[i]) return false;
    return true;
}

BinarySet BinarySet::shifted(Cell offset) const {
    std::vector<std::uint8_t> m(mask_.size(), 0);
    for (int y = 0; y < grid_.height(); ++y)
        for (int x = 0; x < grid_.width(); ++x) {
            Cell src{x - offset.x, y - offset.y};
            if (grid_.contains(src)) m[grid_.index({x, y})] = mask_[grid_.index(src)];
        }
    return {grid_, std::move(m)};
}

ScalarField BinarySet::to_field() const {
    std::vector<double> v(mask_.begin(), mask_.end());
    return {grid_, std::move(v)};
}

int DiscreteBall::half_width(int dy) const {
    int best = -1;
    for (const auto& o : offsets)
        if (o.y == dy) best = std::max(best, o.x);
    return best;
}

DiscreteBall make_discrete_ball(double rho) {
    if (!(rho >= 1.0) || !std::isfinite(rho))
        throw Error(ErrorCode::invalid_radius, "ball radius must be at least 1 cell");
    DiscreteBall ball;
    ball.radius = rho;
    // Small slack so radii like sqrt(2) computed in floating point keep their lattice points.
    const double r2 = rho * rho * (1.0 + 1e-12);
    const int reach = static_cast<int>(std::floor(rho + 1e-9));
    for (int j = -reach; j <= reach; ++j)
        for (int i = -reach; i <= reach; ++i)
            if (double(i) * i + double(j) * j <= r2) ball.offsets.push_back({i, j});
    return ball;
}

std::vector<Cell> window_at(const Grid2D& grid, Cell center, const DiscreteBall& ball) {
    std::vector<Cell> out;
    out.reserve(ball.offsets.size());
    for (const auto& o : ball.offsets) {
        Cell c = center + o;
        if (grid.contains(c)) out.push_back(c);
    }
    return out;
}

bool window_leaves_grid(const Grid2D& grid, Cell center, const DiscreteBall& ball) {
    int r = ball.reach();
    return center.x - r < 0 || center.y - r < 0 || center.x + r >= grid.width() || center.y + r >= grid.height();
}

namespace {

Quantization from_values(std::vector<double> values) {
    Quantization q;
    q.values = std::move(values);
    for (std::size_t i = 1; i < q.values.size(); ++i) q.thresholds.push_back(0.5 * (q.values[i - 1] + q.values[i]));
    return q;
}

}  // namespace

Quantization quantize_range(double lo, double hi, int n_levels) {
    if (n_levels < 2) throw Error(ErrorCode::invalid_argument, "n_levels must be at least 2");
    if (!(hi > lo)) return from_values({lo});
    std::vector<double> v(n_levels);
    for (int k = 0; k < n_levels; ++k) v[k] = lo + (hi - lo) * k / (n_levels - 1);
    return from_values(std::move(v));
}

Quantization quantize(const ScalarField& field, int n_levels) {
    if (n_levels < 2) throw Error(ErrorCode::invalid_argument, "n_levels must be at least 2");
    std::vector<double> distinct(field.values().begin(), field.values().end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() <= static_cast<std::size_t>(n_levels)) return from_values(std::move(distinct));
    return quantize_range(distinct.front(), distinct.back(), n_levels);
}

std::vector<double> quantize_levels(const ScalarField& field, int n_levels) {
    return quantize(field, n_levels).thresholds;
}

ScalarField apply_quantization(const ScalarField& field, const Quantization& q) {
    std::vector<double> out(field.values().begin(), field.values().end());
    for (auto& v : out) {
        auto it = std::upper_bound(q.thresholds.begin(), q.thresholds.end(), v);
        v = q.values[static_cast<std::size_t>(it - q.thresholds.begin())];
    }
    return {field.grid(), std::move(out)};
}

}  // namespace oscflow
