#include "oscflow/cut.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "oscflow/error.hpp"

namespace oscflow {

std::int64_t to_units(double value, double quantum) {
    if (!(quantum > 0.0) || !std::isfinite(quantum))
        throw Error(ErrorCode::invalid_argument, "capacity quantum must be positive");
    double scaled = value / quantum;
    if (!std::isfinite(scaled) || std::abs(scaled) > 4.0e18)
        throw Error(ErrorCode::capacity_overflow, "value does not fit the capacity quantum");
    return std::llround(scaled);
}

namespace {

constexpr cap_t kInfMark = -1;

std::vector<WeightedBall> merge_identical_balls(std::vector<WeightedBall> terms) {
    std::vector<WeightedBall> out;
    for (auto& t : terms) {
        if (!(t.weight > 0.0)) throw Error(ErrorCode::invalid_energy, "window weights must be positive");
        auto it = std::find_if(out.begin(), out.end(), [&](const WeightedBall& o) { return o.ball.offsets == t.ball.offsets; });
        if (it != out.end()) it->weight += t.weight;
        else out.push_back(std::move(t));
    }
    return out;
}

struct RowSpan {
    int dy;
    int half;
};

std::vector<RowSpan> row_spans(const DiscreteBall& ball) {
    std::vector<RowSpan> rows;
    for (int dy = -ball.reach(); dy <= ball.reach(); ++dy) {
        int a = ball.half_width(dy);
        if (a >= 0) rows.push_back({dy, a});
    }
    return rows;
}

int floor_log2(int v) { return std::bit_width(static_cast<unsigned>(v)) - 1; }

}  // namespace

BinaryEnergy BinaryEnergy::from_osc(const Grid2D& grid, std::span<const WeightedBall> terms, std::span<const double> unary) {
    if (unary.size() != grid.size()) throw Error(ErrorCode::invalid_argument, "unary size does not match grid");
    BinaryEnergy e{grid, {}, {}, std::vector<double>(unary.begin(), unary.end())};
    const bool pad = grid.boundary().kind == BoundaryKind::pad_constant;
    for (const auto& t : terms) {
        for (int y = 0; y < grid.height(); ++y)
            for (int x = 0; x < grid.width(); ++x) {
                Window w;
                w.weight = t.weight;
                for (const auto& c : window_at(grid, {x, y}, t.ball)) w.cells.push_back(grid.index(c));
                if (pad && window_leaves_grid(grid, {x, y}, t.ball)) w.pad = static_cast<int>(grid.boundary().pad_value);
                e.windows.push_back(std::move(w));
            }
    }
    return e;
}

double BinaryEnergy::evaluate(const BinarySet& theta) const {
    double total = 0.0;
    for (const auto& w : windows) {
        bool seen[2] = {false, false};
        if (w.pad >= 0) seen[w.pad] = true;
        for (int c : w.cells) seen[theta[c] ? 1 : 0] = true;
        if (seen[0] && seen[1]) total += w.weight;
    }
    for (const auto& p : pairs)
        if (theta[p.a] != theta[p.b]) total += p.weight;
    for (std::size_t i = 0; i < unary.size(); ++i)
        if (theta[i]) total += unary[i];
    return total;
}

std::int64_t BinaryEnergy::evaluate_units(const BinarySet& theta, double quantum) const {
    std::int64_t total = 0;
    for (const auto& w : windows) {
        bool seen[2] = {false, false};
        if (w.pad >= 0) seen[w.pad] = true;
        for (int c : w.cells) seen[theta[c] ? 1 : 0] = true;
        if (seen[0] && seen[1]) total += to_units(w.weight, quantum);
    }
    for (const auto& p : pairs)
        if (theta[p.a] != theta[p.b]) total += to_units(p.weight, quantum);
    for (std::size_t i = 0; i < unary.size(); ++i)
        if (theta[i]) total += to_units(unary[i], quantum);
    return total;
}

BruteForceResult brute_force_binary_min(const BinaryEnergy& energy, double quantum) {
    const std::size_t n = energy.grid.size();
    if (n > 20) throw Error(ErrorCode::too_large, "brute force is limited to 20 cells");
    BruteForceResult r{std::numeric_limits<std::int64_t>::max(), {}, BinarySet(energy.grid), BinarySet(energy.grid)};
    std::vector<std::uint8_t> mask(n);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        for (std::size_t i = 0; i < n; ++i) mask[i] = (bits >> i) & 1u;
        BinarySet theta(energy.grid, mask);
        auto e = energy.evaluate_units(theta, quantum);
        if (e < r.optimum_units) {
            r.optimum_units = e;
            r.minimizers.clear();
        }
        if (e == r.optimum_units) r.minimizers.push_back(std::move(theta));
    }
    r.lattice_min = r.minimizers.front();
    r.lattice_max = r.minimizers.front();
    for (const auto& m : r.minimizers) {
        r.lattice_min = r.lattice_min.intersected(m);
        r.lattice_max = r.lattice_max.united(m);
    }
    return r;
}

CutModel::CutModel(const Grid2D& grid, std::vector<WeightedBall> terms, CutOptions options)
    : grid_(grid), options_(options), graph_{grid, FlowNetwork(static_cast<int>(grid.size())), options.quantum, 0, options.algorithm} {
    terms = merge_identical_balls(std::move(terms));
    const int W = grid.width(), H = grid.height();
    const bool pad = grid.boundary().kind == BoundaryKind::pad_constant;
    const double pv = grid.boundary().pad_value;
    if (pad && pv != 0.0 && pv != 1.0) throw Error(ErrorCode::invalid_argument, "binary cuts need a pad value of 0 or 1");
    const int pad_label = static_cast<int>(pv);

    touch_units_.assign(grid.size(), 0);
    std::vector<Arc> arcs;
    FlowNetwork& net = graph_.network;

    // Sparse tables: or_base[k] / and_base[k] index level-k nodes of width 2^k.
    std::vector<int> or_base, and_base;
    int kmax = 0;
    if (options.encoding == CutEncoding::row_sparse) {
        for (const auto& t : terms)
            for (const auto& r : row_spans(t.ball)) kmax = std::max(kmax, floor_log2(std::min(2 * r.half + 1, W)));
        or_base.assign(kmax + 1, 0);
        and_base.assign(kmax + 1, 0);
        for (int k = 1; k <= kmax; ++k) {
            const int per_row = W - (1 << k) + 1;
            or_base[k] = net.add_nodes(per_row * H);
            and_base[k] = net.add_nodes(per_row * H);
            const int half = 1 << (k - 1);
            auto child = [&](const std::vector<int>& base, int x, int y) {
                return k - 1 == 0 ? y * W + x : base[k - 1] + y * (W - half + 1) + x;
            };
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < per_row; ++x) {
                    int p_or = or_base[k] + y * per_row + x;
                    int p_and = and_base[k] + y * per_row + x;
                    for (int cx : {x, x + half}) {
                        arcs.push_back({child(or_base, cx, y), p_or, kInfMark, 0});
                        arcs.push_back({p_and, child(and_base, cx, y), kInfMark, 0});
                    }
                }
        }
    }
    auto table_node = [&](bool is_or, int k, int x, int y) {
        if (k == 0) return y * W + x;
        const auto& base = is_or ? or_base : and_base;
        return base[k] + y * (W - (1 << k) + 1) + x;
    };

    for (const auto& t : terms) {
        const cap_t c = to_units(t.weight, options.quantum);
        if (c <= 0) throw Error(ErrorCode::invalid_energy, "window weight vanishes at this quantum");
        const auto rows = row_spans(t.ball);
        for (int cy = 0; cy < H; ++cy)
            for (int cx = 0; cx < W; ++cx) {
                bool leaves = false;
                int cells = 0;
                for (const auto& r : rows) {
                    int y = cy + r.dy;
                    if (y < 0 || y >= H) {
                        leaves = true;
                        continue;
                    }
                    int lo = cx - r.half, hi = cx + r.half;
                    if (lo < 0 || hi >= W) leaves = true;
                    cells += std::min(hi, W - 1) - std::max(lo, 0) + 1;
                }
                const bool padded = pad && leaves;
                if (cells <= 1 && !padded) continue;  // a single cell never oscillates

                const bool need_or = !(padded && pad_label == 1);
                const bool need_and = !(padded && pad_label == 0);
                if (!need_or) graph_.offset_units += c;  // OR is pinned to 1

                int or_node = -1, and_node = -1;
                if (need_or) {
                    or_node = net.add_nodes(1);
                    aux_terminals_.push_back({or_node, 0, c});
                }
                if (need_and) {
                    and_node = net.add_nodes(1);
                    aux_terminals_.push_back({and_node, c, 0});
                    graph_.offset_units -= c;
                }
                for (const auto& r : rows) {
                    int y = cy + r.dy;
                    if (y < 0 || y >= H) continue;
                    int lo = std::max(cx - r.half, 0), hi = std::min(cx + r.half, W - 1);
                    for (int x = lo; x <= hi; ++x) touch_units_[y * W + x] += c;
                    if (options.encoding == CutEncoding::direct) {
                        for (int x = lo; x <= hi; ++x) {
                            if (need_or) arcs.push_back({y * W + x, or_node, kInfMark, 0});
                            if (need_and) arcs.push_back({and_node, y * W + x, kInfMark, 0});
                        }
                    } else {
                        const int k = floor_log2(hi - lo + 1);
                        const int x2 = hi - (1 << k) + 1;
                        for (int x : {lo, x2}) {
                            if (need_or) arcs.push_back({table_node(true, k, x, y), or_node, kInfMark, 0});
                            if (need_and) arcs.push_back({and_node, table_node(false, k, x, y), kInfMark, 0});
                            if (x2 == lo) break;
                        }
                    }
                }
            }
    }
    finish(arcs);
}

CutModel::CutModel(const Grid2D& grid, std::vector<BinaryEnergy::Pair> pairs, CutOptions options)
    : grid_(grid), options_(options), graph_{grid, FlowNetwork(static_cast<int>(grid.size())), options.quantum, 0, options.algorithm} {
    touch_units_.assign(grid.size(), 0);
    std::vector<Arc> arcs;
    for (const auto& p : pairs) {
        const cap_t c = to_units(p.weight, options.quantum);
        if (c <= 0) throw Error(ErrorCode::invalid_energy, "pair weights must be positive");
        arcs.push_back({p.a, p.b, c, c});
        touch_units_[p.a] += c;
        touch_units_[p.b] += c;
    }
    finish(arcs);
}

CutModel::CutModel(const BinaryEnergy& energy, CutOptions options)
    : grid_(energy.grid), options_(options),
      graph_{energy.grid, FlowNetwork(static_cast<int>(energy.grid.size())), options.quantum, 0, options.algorithm} {
    touch_units_.assign(grid_.size(), 0);
    std::vector<Arc> arcs;
    FlowNetwork& net = graph_.network;
    for (const auto& w : energy.windows) {
        const cap_t c = to_units(w.weight, options.quantum);
        if (c <= 0) throw Error(ErrorCode::invalid_energy, "window weights must be positive");
        if (w.cells.size() <= 1 && w.pad < 0) continue;
        for (int i : w.cells) touch_units_[i] += c;
        if (w.pad != 1) {
            int y = net.add_nodes(1);
            aux_terminals_.push_back({y, 0, c});
            for (int i : w.cells) arcs.push_back({i, y, kInfMark, 0});
        } else {
            graph_.offset_units += c;
        }
        if (w.pad != 0) {
            int z = net.add_nodes(1);
            aux_terminals_.push_back({z, c, 0});
            graph_.offset_units -= c;
            for (int i : w.cells) arcs.push_back({z, i, kInfMark, 0});
        }
    }
    for (const auto& p : energy.pairs) {
        const cap_t c = to_units(p.weight, options.quantum);
        if (c <= 0) throw Error(ErrorCode::invalid_energy, "pair weights must be positive");
        arcs.push_back({p.a, p.b, c, c});
        touch_units_[p.a] += c;
        touch_units_[p.b] += c;
    }
    finish(arcs);
}

void CutModel::finish(const std::vector<Arc>& arcs) {
    // Any finite cut is bounded by the finite arcs plus the (clamped) terminals.
    constexpr cap_t limit = cap_t{1} << 62;
    cap_t total = 1;
    auto add = [&](cap_t v) {
        if (v > limit - total) throw Error(ErrorCode::capacity_overflow, "total capacity exceeds 2^62 units");
        total += v;
    };
    for (const auto& a : arcs) {
        if (a.cap > 0) add(a.cap);
        if (a.rev > 0) add(a.rev);
    }
    for (const auto& t : aux_terminals_) add(t.source + t.sink);
    for (auto c : touch_units_) add(c + 1);
    const cap_t inf = total;
    for (const auto& a : arcs) graph_.network.add_edge(a.u, a.v, a.cap == kInfMark ? inf : a.cap, a.rev == kInfMark ? inf : a.rev);
    graph_.network.reset();
}

std::pair<cap_t, cap_t> CutModel::clamped_units(std::size_t cell, double value) const {
    const cap_t bound = touch_units_[cell] + 1;
    const cap_t u = to_units(value, options_.quantum);
    return {std::clamp<cap_t>(u, -bound, bound), u < -bound ? u + bound : 0};
}

CutGraph CutModel::prepare(std::span<const double> unary) const {
    if (unary.size() != grid_.size()) throw Error(ErrorCode::invalid_argument, "unary size does not match grid");
    CutGraph g = graph_;
    for (const auto& t : aux_terminals_) g.network.add_terminal(t.node, t.source, t.sink);
    for (std::size_t i = 0; i < unary.size(); ++i) {
        const auto [u, excess] = clamped_units(i, unary[i]);
        g.offset_units += excess;
        if (u > 0) {
            g.network.add_terminal(static_cast<int>(i), 0, u);
        } else if (u < 0) {
            g.network.add_terminal(static_cast<int>(i), -u, 0);
            g.offset_units += u;
        }
    }
    return g;
}

CutSolution CutModel::solve(std::span<const double> unary) const {
    CutGraph g = prepare(unary);
    return solve_min_cut(g);
}

CutSession::CutSession(const CutModel& model) : model_(&model), graph_(model.graph_) {}

CutSolution CutSession::solve(std::span<const double> unary) {
    if (!started_) {
        graph_ = model_->prepare(unary);
        units_.resize(unary.size());
        excess_.resize(unary.size());
        for (std::size_t i = 0; i < unary.size(); ++i)
            std::tie(units_[i], excess_[i]) = model_->clamped_units(i, unary[i]);
        started_ = true;
        return solve_min_cut(graph_);
    }
    if (unary.size() != units_.size()) throw Error(ErrorCode::invalid_argument, "unary size does not match grid");
    for (std::size_t i = 0; i < unary.size(); ++i) {
        const auto [u, excess] = model_->clamped_units(i, unary[i]);
        graph_.offset_units += excess - excess_[i];
        excess_[i] = excess;
        const cap_t delta = u - units_[i];
        if (delta > 0) {
            graph_.network.add_terminal(static_cast<int>(i), 0, delta);
        } else if (delta < 0) {
            graph_.network.add_terminal(static_cast<int>(i), -delta, 0);
            graph_.offset_units += delta;
        }
        units_[i] = u;
    }
    return solve_min_cut(graph_);
}

CutSolution solve_min_cut(CutGraph& graph) {
    const cap_t flow = graph.network.maxflow(graph.algorithm);
    const std::size_t n = graph.grid.size();
    auto lo = graph.network.source_reachable();
    auto hi = graph.network.not_reaching_sink();
    lo.resize(n);
    hi.resize(n);
    CutSolution s{BinarySet(graph.grid, std::move(lo)), BinarySet(graph.grid, std::move(hi)), 0.0, 0.0, 0};
    s.energy_units = flow + graph.offset_units;
    s.flow_value = static_cast<double>(flow) * graph.quantum;
    s.energy = static_cast<double>(s.energy_units) * graph.quantum;
    return s;
}

CutGraph build_binary_osc_graph(const Grid2D& grid, std::span<const WeightedBall> terms, const ScalarField& unary,
                                const CutOptions& options) {
    CutModel model(grid, std::vector<WeightedBall>(terms.begin(), terms.end()), options);
    return model.prepare(unary.values());
}

CutGraph build_binary_graph(const BinaryEnergy& energy, const CutOptions& options) {
    CutModel model(energy, options);
    return model.prepare(energy.unary);
}

std::vector<BinaryEnergy::Pair> tv_pairs(const Grid2D& grid) {
    // Cauchy-Crofton weights for the 8-neighbourhood: delta^2 * (pi/4) / (2 |e|).
    const double h = grid.spacing();
    const double axis = h * std::numbers::pi / 8.0;
    const double diag = h * std::numbers::pi / (8.0 * std::sqrt(2.0));
    std::vector<BinaryEnergy::Pair> pairs;
    const int W = grid.width(), H = grid.height();
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            int i = y * W + x;
            if (x + 1 < W) pairs.push_back({i, i + 1, axis});
            if (y + 1 < H) pairs.push_back({i, i + W, axis});
            if (x + 1 < W && y + 1 < H) pairs.push_back({i, i + W + 1, diag});
            if (x > 0 && y + 1 < H) pairs.push_back({i, i + W - 1, diag});
        }
    return pairs;
}

CutModel make_cut_model(const Grid2D& grid, const EnergyConfig& cfg, const CutOptions& options) {
    if (cfg.kind == EnergyKind::tv_baseline) return CutModel(grid, tv_pairs(grid), options);
    return CutModel(grid, weighted_balls(cfg, grid.spacing()), options);
}

}  // namespace oscflow
