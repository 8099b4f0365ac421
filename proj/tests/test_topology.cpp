#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "gqaa/ising.hpp"
#include "gqaa/quantum_exact.hpp"
#include "gqaa/topology.hpp"

using namespace gqaa;

TEST_CASE("nearest-neighbor: path graph with attractive couplings") {
    const ColumnGraph g3 = build_nearest_neighbor(3, 0.1);
    REQUIRE(g3.edges.size() == 2);
    CHECK(g3.edges[0].a == 0);
    CHECK(g3.edges[0].b == 1);
    CHECK(g3.edges[1].a == 1);
    CHECK(g3.edges[1].b == 2);
    for (const auto& e : g3.edges) CHECK(e.j == -0.1);

    const ColumnGraph g2 = build_nearest_neighbor(2, 0.5);
    CHECK(g2.edges.size() == 1);

    const ColumnGraph g30 = build_nearest_neighbor(30, 0.07);
    CHECK(g30.edges.size() == 29);
    for (const auto& e : g30.edges) CHECK(e.j == -0.07);

    CHECK_THROWS_AS(build_nearest_neighbor(1, 0.1), std::invalid_argument);
}

TEST_CASE("islands: degenerate fractions") {
    PolyandryConfig cfg;
    cfg.base_j = 0.07;
    cfg.island_size = 5;
    cfg.seed = 3;

    cfg.rho = 0.0;
    cfg.rho_prime = 0.1;
    for (const auto& e : build_islands(20, cfg).edges)
        CHECK(e.j < 0.0);  // everything attractive

    cfg.rho = 0.5;
    cfg.rho_prime = 0.0;
    const ColumnGraph g = build_islands(20, cfg);
    // no hub edges: 4 complete islands of 5 -> 4 * C(5,2) edges
    CHECK(g.edges.size() == 4 * 10);
    for (const auto& e : g.edges) {
        CHECK(e.a / 5 == e.b / 5);  // never crosses an island boundary
        CHECK(std::abs(e.j) == 0.07);
    }
}

TEST_CASE("islands: Table-style configuration has two enhanced hub edges") {
    PolyandryConfig cfg;
    cfg.base_j = 0.07;
    cfg.rho = 0.5;
    cfg.rho_prime = 0.064;  // ceil(0.064 * 30) = 2
    cfg.kappa = -0.15;
    cfg.island_size = 5;
    cfg.seed = 99;
    const ColumnGraph g = build_islands(30, cfg);
    int hub_edges = 0;
    for (const auto& e : g.edges)
        if (e.j == -0.15) {
            ++hub_edges;
            CHECK((e.a == 29 || e.b == 29));  // emanates from the fittest rank position
        }
    CHECK(hub_edges == 2);
}

TEST_CASE("islands: repulsive fraction converges to rho over seeds") {
    PolyandryConfig cfg;
    cfg.base_j = 0.07;
    cfg.rho = 0.5;
    cfg.rho_prime = 0.0;
    cfg.island_size = 5;
    int repulsive = 0, total = 0;
    for (int seed = 0; seed < 200; ++seed) {
        cfg.seed = seed;
        for (const auto& e : build_islands(30, cfg).edges) {
            ++total;
            if (e.j > 0.0) ++repulsive;
        }
    }
    const double fraction = static_cast<double>(repulsive) / total;
    const double sigma = std::sqrt(0.25 / total);
    CHECK(std::abs(fraction - 0.5) < 4.0 * sigma);
}

TEST_CASE("islands: deterministic in the seed, final island may be smaller") {
    PolyandryConfig cfg;
    cfg.island_size = 4;
    cfg.seed = 1234;
    const ColumnGraph a = build_islands(10, cfg);
    const ColumnGraph b = build_islands(10, cfg);
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        CHECK(a.edges[i].a == b.edges[i].a);
        CHECK(a.edges[i].b == b.edges[i].b);
        CHECK(a.edges[i].j == b.edges[i].j);
    }
    // islands {0..3}, {4..7}, {8,9}: 6 + 6 + 1 island edges, plus hubs
    int island_edges = 0;
    for (const auto& e : a.edges)
        if (std::abs(e.j) == cfg.base_j) ++island_edges;
    CHECK(island_edges >= 13 - 1);  // a hub edge may replace one island edge
    CHECK_THROWS_AS(build_islands(3, cfg), std::invalid_argument);
}

TEST_CASE("expand: N=1 is isomorphic to the column graph") {
    const ColumnGraph column = build_nearest_neighbor(4, 0.2);
    std::vector<std::vector<double>> h = {{0.1}, {-0.2}, {0.3}, {-0.4}};
    const IsingProblem p = expand_to_population(column, 1, h);
    CHECK(p.n_spins == 4);
    CHECK(p.h == std::vector<double>{0.1, -0.2, 0.3, -0.4});
    REQUIRE(p.j.size() == column.edges.size());
    for (const auto& e : column.edges) CHECK(p.coupling(e.a, e.b) == e.j);
}

TEST_CASE("expand: coupling count is alleles times column edges") {
    PolyandryConfig cfg;
    cfg.seed = 7;
    const ColumnGraph column = build_islands(10, cfg);
    std::vector<std::vector<double>> h(10, std::vector<double>(6, 0.0));
    const IsingProblem p = expand_to_population(column, 6, h);
    CHECK(p.j.size() == column.edges.size() * 6);
    CHECK(p.n_spins == 60);
}

TEST_CASE("expand: energy decomposes into per-column energies") {
    Rng rng(2025);
    ColumnGraph column;
    column.n_nodes = 4;
    column.edges = {{0, 1, -0.3}, {1, 2, 0.2}, {0, 3, -0.1}, {2, 3, 0.15}};
    std::vector<std::vector<double>> h(4, std::vector<double>(4));
    for (auto& row : h)
        for (auto& v : row) v = 2.0 * uniform01(rng) - 1.0;
    const IsingProblem p = expand_to_population(column, 4, h);

    for (int trial = 0; trial < 20; ++trial) {
        SpinConfig s(16);
        for (auto& v : s) v = coin_flip(rng) ? 1 : -1;
        double per_column_sum = 0.0;
        for (int allele = 0; allele < 4; ++allele) {
            IsingProblem col_problem(4);
            SpinConfig col_spins(4);
            for (int i = 0; i < 4; ++i) {
                col_problem.h[i] = h[i][allele];
                col_spins[i] = s[i * 4 + allele];
            }
            for (const auto& e : column.edges) col_problem.set_coupling(e.a, e.b, e.j);
            per_column_sum += energy(col_problem, col_spins);
        }
        CHECK(energy(p, s) == doctest::Approx(per_column_sum).epsilon(1e-12));
    }
}

TEST_CASE("expand: connected components stay within allele columns") {
    PolyandryConfig cfg;
    cfg.seed = 5;
    const ColumnGraph column = build_islands(10, cfg);
    std::vector<std::vector<double>> h(10, std::vector<double>(3, 0.0));
    const IsingProblem p = expand_to_population(column, 3, h);
    for (const auto& component : connected_components(p)) {
        std::set<int> alleles;
        for (int spin : component) alleles.insert(spin % 3);
        CHECK(alleles.size() == 1);
    }
}

TEST_CASE("expand: dimension mismatches are refused") {
    const ColumnGraph column = build_nearest_neighbor(3, 0.1);
    std::vector<std::vector<double>> wrong_rows(2, std::vector<double>(4, 0.0));
    CHECK_THROWS_AS(expand_to_population(column, 4, wrong_rows), std::invalid_argument);
    std::vector<std::vector<double>> ragged(3, std::vector<double>(4, 0.0));
    ragged[1].resize(3);
    CHECK_THROWS_AS(expand_to_population(column, 4, ragged), std::invalid_argument);
}

TEST_CASE("expand: coupling values depend only on row position, never on row contents") {
    // the generation loop rebuilds the population model every generation
    // with fresh bias rows; the J part must be identical every time
    PolyandryConfig cfg;
    cfg.seed = 21;
    const ColumnGraph column = build_islands(10, cfg);
    Rng rng(3);
    auto random_h = [&]() {
        std::vector<std::vector<double>> h(10, std::vector<double>(4));
        for (auto& row : h)
            for (auto& v : row) v = 2.0 * uniform01(rng) - 1.0;
        return h;
    };
    const IsingProblem a = expand_to_population(column, 4, random_h());
    const IsingProblem b = expand_to_population(column, 4, random_h());
    CHECK(a.j == b.j);
    CHECK(a.h != b.h);
}

TEST_CASE("polyandry config: invariant checks") {
    PolyandryConfig cfg;
    cfg.rho = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.rho = 0.5;
    cfg.kappa = 0.2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.kappa = -0.15;
    cfg.base_j = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
