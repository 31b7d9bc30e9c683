#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "oscflow/checks.hpp"
#include "oscflow/cut.hpp"
#include "oscflow/error.hpp"
#include "oscflow/maxflow.hpp"

using namespace oscflow;

namespace {

struct RandomNetwork {
    struct E {
        int u, v;
        cap_t cap, rev;
    };
    int n = 0;
    std::vector<E> edges;
    std::vector<std::pair<cap_t, cap_t>> terminals;

    static RandomNetwork make(std::mt19937_64& rng, int n, int m, cap_t max_cap) {
        RandomNetwork r;
        r.n = n;
        std::uniform_int_distribution<int> node(0, n - 1);
        std::uniform_int_distribution<cap_t> cap(0, max_cap);
        for (int k = 0; k < m; ++k) {
            int u = node(rng), v = node(rng);
            if (u == v) continue;
            r.edges.push_back({u, v, cap(rng), rng() % 3 ? 0 : cap(rng)});
        }
        for (int i = 0; i < n; ++i) r.terminals.push_back({rng() % 2 ? cap(rng) : 0, rng() % 2 ? cap(rng) : 0});
        return r;
    }

    FlowNetwork build() const {
        FlowNetwork net(n);
        for (const auto& e : edges) net.add_edge(e.u, e.v, e.cap, e.rev);
        for (int i = 0; i < n; ++i) net.add_terminal(i, terminals[i].first, terminals[i].second);
        return net;
    }

    cap_t cut_value(const std::vector<std::uint8_t>& S) const {
        cap_t c = 0;
        for (int i = 0; i < n; ++i) c += S[i] ? terminals[i].second : terminals[i].first;
        for (const auto& e : edges) {
            if (S[e.u] && !S[e.v]) c += e.cap;
            if (S[e.v] && !S[e.u]) c += e.rev;
        }
        return c;
    }
};

std::vector<double> random_unary(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    std::vector<double> g(n);
    for (double& x : g) x = U(rng);
    return g;
}

}  // namespace

TEST_CASE("flow network basics") {
    SUBCASE("single pixel, source 2 sink 1") {
        FlowNetwork net(1);
        net.add_terminal(0, 2, 1);
        CHECK(net.maxflow() == 1);
        CHECK(net.source_reachable()[0] == 1);
        CHECK(net.not_reaching_sink()[0] == 1);
    }
    SUBCASE("tie exposes both extremal cuts") {
        FlowNetwork net(1);
        net.add_terminal(0, 1, 1);
        CHECK(net.maxflow() == 1);
        CHECK(net.source_reachable()[0] == 0);
        CHECK(net.not_reaching_sink()[0] == 1);
    }
    SUBCASE("path") {
        FlowNetwork net(3);
        net.add_edge(0, 1, 5);
        net.add_edge(1, 2, 3);
        net.add_terminal(0, 10, 0);
        net.add_terminal(2, 0, 10);
        CHECK(net.maxflow(FlowAlgorithm::bfs_augment) == 3);
        CHECK(net.check_flow_conservation());
        std::ostringstream dump;
        net.dump(dump);
        CHECK(dump.str().rfind("p 3 4\n", 0) == 0);
    }
    SUBCASE("bad input") {
        FlowNetwork net(2);
        CHECK_THROWS_AS(net.add_edge(0, 2, 1), Error);
        CHECK_THROWS_AS(net.add_edge(0, 1, -1), Error);
        CHECK_THROWS_AS(net.add_terminal(0, -1, 0), Error);
        net.maxflow();
        CHECK_THROWS_AS(net.add_edge(0, 1, 1), Error);
    }
}

TEST_CASE("both algorithms find the max flow and the extremal min cuts") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 40);
        auto r = RandomNetwork::make(rng, n, 4 * n, t % 2 ? 5 : 1000000);
        auto a = r.build(), b = r.build();
        const cap_t fa = a.maxflow(FlowAlgorithm::search_trees), fb = b.maxflow(FlowAlgorithm::bfs_augment);
        CHECK(fa == fb);
        CHECK(a.check_flow_conservation());
        CHECK(b.check_flow_conservation());
        for (auto* net : {&a, &b}) {
            auto lo = net->source_reachable(), hi = net->not_reaching_sink();
            CHECK(r.cut_value(lo) == fa);
            CHECK(r.cut_value(hi) == fa);
            for (int i = 0; i < n; ++i) CHECK(lo[i] <= hi[i]);
        }
        CHECK(a.source_reachable() == b.source_reachable());
        CHECK(a.not_reaching_sink() == b.not_reaching_sink());
    }
}

TEST_CASE("terminal updates continue from the previous flow") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 50; ++t) {
        const int n = 5 + static_cast<int>(rng() % 30);
        auto r = RandomNetwork::make(rng, n, 5 * n, 50);
        auto warm = r.build();
        warm.maxflow();
        for (int round = 0; round < 5; ++round) {
            for (int k = 0; k < 3; ++k) {
                const int i = static_cast<int>(rng() % n);
                const cap_t s = rng() % 40, z = rng() % 40;
                r.terminals[i].first += s;
                r.terminals[i].second += z;
                warm.add_terminal(i, s, z);
            }
            auto fresh = r.build();
            CHECK(warm.maxflow() == fresh.maxflow());
            CHECK(warm.source_reachable() == fresh.source_reachable());
            CHECK(warm.not_reaching_sink() == fresh.not_reaching_sink());
            CHECK(warm.check_flow_conservation());
        }
    }
}

TEST_CASE("small cut instances") {
    const auto balls1 = weighted_balls(EnergyConfig::osc(1.0), 1.0);

    SUBCASE("1x1, positive unary") {
        Grid2D g(1, 1);
        auto sol = make_cut_model(g, EnergyConfig::osc(1.0)).solve(std::vector<double>{1.0});
        CHECK(sol.energy == 0.0);
        CHECK(sol.max_labeling.empty());
    }
    SUBCASE("2x1 against enumeration") {
        Grid2D g(2, 1);
        std::vector<double> unary{-1.0, 0.1};
        auto energy = BinaryEnergy::from_osc(g, balls1, unary);
        CHECK(energy.windows.front().weight == 0.5);
        auto bf = brute_force_binary_min(energy);
        auto sol = make_cut_model(g, EnergyConfig::osc(1.0)).solve(unary);
        CHECK(sol.energy_units == bf.optimum_units);
        CHECK(sol.min_labeling == bf.lattice_min);
        CHECK(sol.max_labeling == bf.lattice_max);
        // Splitting costs two mixed windows (1.0), so theta = (1, 0) at -1 wins over (1, 1) at -0.9.
        CHECK(sol.min_labeling.at(0, 0));
        CHECK(sol.energy == doctest::Approx(-0.9));
    }
    SUBCASE("3x3, uniform negative unary") {
        Grid2D g(3, 3);
        std::vector<double> unary(9, -0.1);
        auto sol = make_cut_model(g, EnergyConfig::osc(1.0)).solve(unary);
        CHECK(sol.min_labeling.full());
        CHECK(sol.energy == doctest::Approx(-0.9).epsilon(1e-9));
        auto bf = brute_force_binary_min(BinaryEnergy::from_osc(g, balls1, unary));
        CHECK(bf.minimizers.size() == 1);
        CHECK(bf.lattice_min.full());
    }
    SUBCASE("brute force edge cases") {
        BinaryEnergy one{Grid2D(1, 1), {}, {}, {0.0}};
        auto bf = brute_force_binary_min(one);
        CHECK(bf.optimum_units == 0);
        CHECK(bf.minimizers.size() == 2);
        BinaryEnergy big{Grid2D(7, 3), {}, {}, std::vector<double>(21, 0.0)};
        CHECK_THROWS_AS(brute_force_binary_min(big), Error);
    }
    SUBCASE("invalid energies") {
        Grid2D g(3, 3);
        std::vector<WeightedBall> bad{{make_discrete_ball(1.0), 0.0}};
        CHECK_THROWS_AS(CutModel(g, bad), Error);
        try {
            CutModel(g, bad);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_energy);
        }
        CutOptions zero;
        zero.quantum = 0.0;
        CHECK_THROWS_AS(make_cut_model(g, EnergyConfig::osc(1.0), zero), Error);
        CutOptions tiny;
        tiny.quantum = 1e-300;
        CHECK_THROWS_AS(make_cut_model(g, EnergyConfig::osc(1.0), tiny).solve(std::vector<double>(9, 1.0)), Error);
    }
}

TEST_CASE("exactness against exhaustive search") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
        const int w = 1 + static_cast<int>(rng() % 4), h = 1 + static_cast<int>(rng() % 4);
        BoundaryMode b = t % 3 == 0 ? BoundaryMode::clip() : BoundaryMode::pad(t % 3 == 1 ? 0.0 : 1.0);
        Grid2D g(w, h, 1.0, b);
        const double rho = t % 2 ? 1.5 : 1.0;
        auto unary = random_unary(rng, g.size());
        auto energy = BinaryEnergy::from_osc(g, weighted_balls(EnergyConfig::osc(rho), 1.0), unary);
        auto bf = brute_force_binary_min(energy);
        for (auto enc : {CutEncoding::direct, CutEncoding::row_sparse})
            for (auto alg : {FlowAlgorithm::search_trees, FlowAlgorithm::bfs_augment}) {
                CutOptions opt;
                opt.encoding = enc;
                opt.algorithm = alg;
                auto sol = make_cut_model(g, EnergyConfig::osc(rho), opt).solve(unary);
                CHECK(sol.energy_units == bf.optimum_units);
                CHECK(sol.min_labeling == bf.lattice_min);
                CHECK(sol.max_labeling == bf.lattice_max);
                CHECK(energy.evaluate_units(sol.min_labeling, opt.quantum) == bf.optimum_units);
            }
        for (const auto& m : bf.minimizers) {
            CHECK(bf.lattice_min.subset_of(m));
            CHECK(m.subset_of(bf.lattice_max));
        }
    }
}

TEST_CASE("eight-pixel profile energies against exhaustive search") {
    std::mt19937_64 rng(5);
    auto profile = make_trapezoid_profile(2.5, 1.0, 3);
    for (int t = 0; t < 100; ++t) {
        Grid2D g(t % 2 ? 4 : 2, t % 2 ? 2 : 4);
        auto unary = random_unary(rng, g.size(), 2.0);
        auto energy = BinaryEnergy::from_osc(g, weighted_balls(EnergyConfig::with_profile(profile), 1.0), unary);
        auto bf = brute_force_binary_min(energy);
        auto sol = make_cut_model(g, EnergyConfig::with_profile(profile)).solve(unary);
        CHECK(sol.energy_units == bf.optimum_units);
        CHECK(sol.min_labeling == bf.lattice_min);
        CHECK(sol.max_labeling == bf.lattice_max);
    }
}

TEST_CASE("monotonicity of the cut map") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        Grid2D g(4, 4);
        auto model = make_cut_model(g, EnergyConfig::osc(1.5));
        auto unary = random_unary(rng, g.size());
        auto lower = unary;
        std::uniform_real_distribution<double> U(0.0, 0.5);
        for (double& x : lower) x -= U(rng);
        auto a = model.solve(unary), b = model.solve(lower);
        CHECK(a.min_labeling.subset_of(b.min_labeling));
        CHECK(a.max_labeling.subset_of(b.max_labeling));
    }
}

TEST_CASE("flow value ignores window order and pixel numbering") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 50; ++t) {
        Grid2D g(4, 4);
        auto unary = random_unary(rng, g.size());
        auto energy = BinaryEnergy::from_osc(g, weighted_balls(EnergyConfig::osc(1.5), 1.0), unary);
        const auto base = CutModel(energy).solve(unary).energy_units;

        auto shuffled = energy;
        std::shuffle(shuffled.windows.begin(), shuffled.windows.end(), rng);
        CHECK(CutModel(shuffled).solve(unary).energy_units == base);

        std::vector<int> perm(g.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        BinaryEnergy relabeled{Grid2D(static_cast<int>(g.size()), 1), {}, {}, std::vector<double>(g.size())};
        for (std::size_t i = 0; i < g.size(); ++i) relabeled.unary[perm[i]] = unary[i];
        for (auto w : energy.windows) {
            for (int& c : w.cells) c = perm[c];
            relabeled.windows.push_back(w);
        }
        CHECK(CutModel(relabeled).solve(relabeled.unary).energy_units == base);
    }
}

TEST_CASE("encodings agree and sessions match fresh solves on larger grids") {
    std::mt19937_64 rng(77);
    for (auto b : {BoundaryMode::clip(), BoundaryMode::pad(0.0), BoundaryMode::pad(1.0)}) {
        Grid2D g(24, 20, 1.0, b);
        const auto cfg = EnergyConfig::with_profile(make_trapezoid_profile(4.0, 1.5, 3));
        CutOptions direct;
        direct.encoding = CutEncoding::direct;
        auto m_direct = make_cut_model(g, cfg, direct);
        auto m_sparse = make_cut_model(g, cfg);
        CHECK(m_sparse.arc_count() < m_direct.arc_count());
        CutSession session(m_sparse);
        auto E = random_blob(g, rng, 3, 2.0, 6.0);
        for (int k = 0; k < 6; ++k) {
            std::vector<double> unary(g.size());
            std::normal_distribution<double> N(0.0, 0.4);
            for (std::size_t i = 0; i < g.size(); ++i) unary[i] = (E[i] ? -0.3 : 0.3) + N(rng);
            auto a = m_direct.solve(unary), c = m_sparse.solve(unary), s = session.solve(unary);
            CHECK(a.energy_units == c.energy_units);
            CHECK(a.min_labeling == c.min_labeling);
            CHECK(a.max_labeling == c.max_labeling);
            CHECK(s.energy_units == c.energy_units);
            CHECK(s.min_labeling == c.min_labeling);
            CHECK(s.max_labeling == c.max_labeling);
            CHECK(s.min_labeling.subset_of(s.max_labeling));
        }
    }
}

TEST_CASE("pairwise perimeter graph") {
    std::mt19937_64 rng(3);
    Grid2D g(3, 3);
    auto pairs = tv_pairs(g);
    for (const auto& p : pairs) CHECK(p.weight > 0.0);
    for (int t = 0; t < 50; ++t) {
        auto unary = random_unary(rng, g.size());
        BinaryEnergy e{g, {}, pairs, unary};
        auto bf = brute_force_binary_min(e);
        auto sol = CutModel(g, pairs).solve(unary);
        CHECK(sol.energy_units == bf.optimum_units);
        CHECK(sol.min_labeling == bf.lattice_min);
        CHECK(sol.max_labeling == bf.lattice_max);
    }
}
