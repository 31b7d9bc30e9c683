#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oscflow/error.hpp"
#include "oscflow/grid.hpp"
#include "oscflow/pgm.hpp"
#include "oscflow/profile.hpp"

using namespace oscflow;

namespace {

// Lattice points with i^2 + j^2 <= r^2 by plain enumeration.
std::set<std::pair<int, int>> lattice_disk(double r) {
    std::set<std::pair<int, int>> out;
    const int R = static_cast<int>(std::ceil(r)) + 1;
    for (int j = -R; j <= R; ++j)
        for (int i = -R; i <= R; ++i)
            if (i * i + j * j <= r * r) out.insert({i, j});
    return out;
}

std::set<std::pair<int, int>> as_set(const DiscreteBall& b) {
    std::set<std::pair<int, int>> out;
    for (const auto& c : b.offsets) out.insert({c.x, c.y});
    return out;
}

}  // namespace

TEST_CASE("grid and field invariants") {
    CHECK_THROWS_AS(Grid2D(0, 3), Error);
    CHECK_THROWS_AS(Grid2D(3, 3, 0.0), Error);
    Grid2D g(4, 3, 0.5);
    CHECK(g.size() == 12);
    CHECK(g.index({2, 1}) == 6);
    CHECK(g.cell(6) == Cell{2, 1});
    CHECK(g.contains({3, 2}));
    CHECK_FALSE(g.contains({4, 0}));
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(11, 0.0)), Error);
    std::vector<double> bad(12, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField(g, bad), Error);
    CHECK_THROWS_AS(BinarySet(g, std::vector<std::uint8_t>(12, 2)), Error);
}

TEST_CASE("discrete balls") {
    SUBCASE("rho = 1 is the plus stencil") {
        auto b = make_discrete_ball(1.0);
        CHECK(as_set(b) == std::set<std::pair<int, int>>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    }
    CHECK(make_discrete_ball(2.0).offsets.size() == 13);
    CHECK(make_discrete_ball(1.5).offsets.size() == 9);
    CHECK_THROWS_AS(make_discrete_ball(0.99), Error);
    try {
        make_discrete_ball(0.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_radius);
    }

    SUBCASE("matches enumeration, odd count, symmetric") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(1.0, 12.0);
        for (int t = 0; t < 60; ++t) {
            const double r = t < 10 ? 1.0 + t : U(rng);
            auto b = make_discrete_ball(r);
            auto s = as_set(b);
            CHECK(s == lattice_disk(r));
            CHECK(b.offsets.size() % 2 == 1);
            for (auto [i, j] : s) {
                CHECK(s.count({-i, -j}) == 1);
                CHECK(s.count({j, i}) == 1);
            }
            CHECK(std::is_sorted(b.offsets.begin(), b.offsets.end(),
                                 [](Cell a, Cell c) { return a.y != c.y ? a.y < c.y : a.x < c.x; }));
        }
    }
}

TEST_CASE("windows") {
    auto b1 = make_discrete_ball(1.0);
    Grid2D g3(3, 3);
    auto corner = window_at(g3, {0, 0}, b1);
    CHECK(corner.size() == 3);
    CHECK(window_at(g3, {1, 1}, b1).size() == 5);
    CHECK(window_at(Grid2D(1, 1), {0, 0}, make_discrete_ball(3.0)).size() == 1);

    SUBCASE("translation of interior windows") {
        Grid2D g(30, 30);
        auto b = make_discrete_ball(3.5);
        for (int z = 1; z < 5; ++z) {
            auto a = window_at(g, {10, 11}, b), c = window_at(g, {10 + z, 11 - z}, b);
            REQUIRE(a.size() == c.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(c[k] == Cell{a[k].x + z, a[k].y - z});
        }
    }
}

TEST_CASE("trapezoid profile") {
    auto p = make_trapezoid_profile(3.0, 1.0);
    CHECK(p.plateau_height == doctest::Approx(0.25).epsilon(1e-15));
    double sum = 0.0;
    for (auto q : p.quadrature) sum += q.w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    auto one = make_trapezoid_profile(2.0, 1.0, 1);
    REQUIRE(one.quadrature.size() == 1);
    CHECK(one.quadrature[0].s == 1.5);
    CHECK(one.quadrature[0].w == 1.0);

    auto thin = make_trapezoid_profile(1.0001, 1.0, 8);
    sum = 0.0;
    for (auto q : thin.quadrature) sum += q.w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    CHECK_THROWS_AS(make_trapezoid_profile(1.0, 1.0), Error);
    CHECK_THROWS_AS(make_trapezoid_profile(2.0, 0.0), Error);
    CHECK_THROWS_AS(make_trapezoid_profile(3.0, 1.0, 0), Error);

    SUBCASE("shape and normalization on random parameters") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            const double rho0 = 0.5 + 10.0 * U(rng), delta = (0.01 + 0.98 * U(rng)) * rho0;
            const int n = 1 + static_cast<int>(40 * U(rng));
            auto q = make_trapezoid_profile(rho0, delta, n);
            double s = 0.0;
            for (auto node : q.quadrature) {
                CHECK(node.s >= delta);
                CHECK(node.s <= rho0);
                CHECK(node.w >= 0.0);
                s += node.w;
            }
            CHECK(std::abs(s - 1.0) <= 1e-12);
            CHECK(q.f(0.0) == q.f(delta));
            CHECK(q.f(-0.5 * rho0) == q.f(0.5 * rho0));
            CHECK(q.f(rho0 * 1.01) == 0.0);
            for (int k = 0; k < 20; ++k) CHECK(q.f(k * rho0 / 20) >= q.f((k + 1) * rho0 / 20));
            // Unnormalized mass of -2 s f'(s) over [0, rho0] is one.
            CHECK(q.plateau_height * (rho0 * rho0 - delta * delta) / (rho0 - delta) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("quantization") {
    Grid2D g(2, 1);
    CHECK(quantize_levels(ScalarField(g, {0.0, 1.0}), 2) == std::vector<double>{0.5});
    CHECK(quantize_levels(ScalarField(Grid2D(3, 1), {-1.0, 0.0, 2.0}), 3) == std::vector<double>{-0.5, 1.0});
    CHECK(quantize_levels(ScalarField(Grid2D(3, 3), 4.0), 8).empty());

    SUBCASE("thresholding and re-integration reconstruct the quantized field") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> N(0.0, 2.0);
        Grid2D big(16, 16);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> v(big.size());
            for (double& x : v) x = N(rng);
            ScalarField f(big, v);
            const int n = 2 + t;
            auto q = quantize(f, n);
            auto qf = apply_quantization(f, q);
            CHECK(std::is_sorted(q.thresholds.begin(), q.thresholds.end()));
            CHECK(std::adjacent_find(q.thresholds.begin(), q.thresholds.end()) == q.thresholds.end());
            for (std::size_t i = 0; i < big.size(); ++i) {
                double rebuilt = q.values.front();
                for (std::size_t k = 0; k < q.thresholds.size(); ++k)
                    if (f[i] > q.thresholds[k]) rebuilt += q.values[k + 1] - q.values[k];
                CHECK(rebuilt == doctest::Approx(qf[i]).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(quantize_levels(ScalarField(g, {0.0, 1.0}), 1), Error);
}

TEST_CASE("pgm") {
    Grid2D g(5, 3);
    std::vector<std::uint8_t> m(g.size(), 0);
    m[2] = m[7] = m[14] = 1;
    BinarySet s(g, m);
    const auto bytes = encode_pgm(set_to_image(s));
    CHECK(bytes.substr(0, 11) == "P5\n5 3\n255\n");
    CHECK(bytes.size() == 11 + 15);
    CHECK(static_cast<unsigned char>(bytes[11 + 2]) == 0);
    CHECK(static_cast<unsigned char>(bytes[11 + 0]) == 255);
    CHECK(image_to_set(parse_pgm(bytes)) == s);

    auto ascii = parse_pgm("P2\n# comment\n3 1\n15\n0 8 15\n");
    CHECK(ascii.maxval == 15);
    auto as = image_to_set(ascii);
    CHECK(as.at(0, 0));
    CHECK_FALSE(as.at(1, 0));
    CHECK_FALSE(as.at(2, 0));

    for (const char* bad : {"", "P6\n1 1\n255\n\x00", "P5\n2 2\n255\n\x01", "P5\n0 2\n255\n", "P2\n2 1\n255\n1 300\n"}) {
        CHECK_THROWS_AS(parse_pgm(bad), Error);
    }
    CHECK_THROWS_AS(read_pgm("/nonexistent/file.pgm"), Error);
}
