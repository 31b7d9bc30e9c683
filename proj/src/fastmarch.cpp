#include "oscflow/fastmarch.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "oscflow/error.hpp"

namespace oscflow {

std::size_t Band::seeded() const {
    return static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(), [](double d) { return d < kUnset; }));
}

double distance_cap(const Grid2D& grid) {
    return std::hypot(static_cast<double>(grid.width()), static_cast<double>(grid.height())) * grid.spacing();
}

Band init_band(const ScalarField& field) {
    const Grid2D& g = field.grid();
    Band band{g, std::vector<double>(g.size(), kUnset), std::vector<std::uint8_t>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) band.inside[i] = field[i] <= 0.0;
    const double h = g.spacing();
    auto edge = [&](int i, int j) {
        if (band.inside[i] == band.inside[j]) return;
        const double ui = field[i], uj = field[j];
        const double t = ui / (ui - uj);  // crossing position from i toward j
        band.dist[i] = std::min(band.dist[i], t * h);
        band.dist[j] = std::min(band.dist[j], (1.0 - t) * h);
    };
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            int i = g.index({x, y});
            if (x + 1 < g.width()) edge(i, i + 1);
            if (y + 1 < g.height()) edge(i, i + g.width());
        }
    return band;
}

Band point_seeds(const Grid2D& grid, const std::vector<Cell>& cells) {
    Band band{grid, std::vector<double>(grid.size(), kUnset), std::vector<std::uint8_t>(grid.size(), 0)};
    for (const auto& c : cells) {
        if (!grid.contains(c)) throw Error(ErrorCode::invalid_argument, "seed outside the grid");
        band.dist[grid.index(c)] = 0.0;
    }
    return band;
}

SignedDistanceField fast_march(const Band& band) {
    const Grid2D& g = band.grid;
    const int W = g.width(), H = g.height();
    const double h = g.spacing();
    const double cap = distance_cap(g);
    std::vector<double> d = band.dist;
    std::vector<std::uint8_t> done(g.size(), 0);

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] < kUnset) heap.push({d[i], static_cast<int>(i)});

    auto known = [&](int x, int y) { return done[y * W + x] ? d[y * W + x] : kUnset; };
    auto update = [&](int x, int y) {
        const int i = y * W + x;
        if (done[i] || band.dist[i] < kUnset) return;
        double a = std::min(x > 0 ? known(x - 1, y) : kUnset, x + 1 < W ? known(x + 1, y) : kUnset);
        double b = std::min(y > 0 ? known(x, y - 1) : kUnset, y + 1 < H ? known(x, y + 1) : kUnset);
        if (a > b) std::swap(a, b);
        double v = (b - a >= h) ? a + h : 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
        if (v < d[i]) {
            d[i] = v;
            heap.push({v, i});
        }
    };

    double last = 0.0;
    while (!heap.empty()) {
        auto [v, i] = heap.top();
        heap.pop();
        if (done[i] || v > d[i]) continue;
        if (v < last - 1e-12 * std::max(1.0, last))
            throw Error(ErrorCode::internal, "fast marching accepted a decreasing value");
        last = std::max(last, v);
        done[i] = 1;
        const int x = i % W, y = i / W;
        if (x > 0) update(x - 1, y);
        if (x + 1 < W) update(x + 1, y);
        if (y > 0) update(x, y - 1);
        if (y + 1 < H) update(x, y + 1);
    }

    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double m = std::min(d[i], cap);
        out[i] = band.inside[i] ? -m : m;
    }
    return {g, std::move(out)};
}

SignedDistanceField signed_distance(const ScalarField& field) { return fast_march(init_band(field)); }

SignedDistanceField signed_distance(const BinarySet& set) {
    std::vector<double> u(set.grid().size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = set[i] ? -0.5 : 0.5;
    return signed_distance(ScalarField(set.grid(), std::move(u)));
}

}  // namespace oscflow
