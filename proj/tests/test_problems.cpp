#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gqaa/problems.hpp"

using namespace gqaa;

namespace {

// Table-style fixtures whose cube sums have been summed by hand; every row
// verified to balance with disjoint sides.
struct Fixture {
    std::vector<long long> a, b;
    long long sum;
};

const std::vector<Fixture> kCubeFixtures = {
    {{1, 12}, {9, 10}, 1729},
    {{9, 15}, {16, 2}, 4104},
    {{24, 19}, {10, 27}, 20683},
    {{1, 3, 3, 9, 13, 11}, {12, 8, 4, 6, 4, 12}, 4312},
    {{27, 15, 27, 18, 10, 27}, {30, 16, 12, 31, 12, 17}, 69256},
    {{7, 3, 31, 16, 24, 20}, {28, 18, 1, 8, 28, 18}, 56081},
    {{13, 9, 8, 6, 8, 8}, {10, 2, 10, 11, 2, 11}, 4678},
    {{25, 9, 5, 10, 3, 9}, {7, 15, 21, 12, 11, 13}, 18235},
    {{24, 26, 25, 3, 7, 11}, {22, 20, 20, 28, 5, 1}, 48726},
    {{22, 6, 2, 2, 19, 24, 4, 24}, {21, 13, 13, 5, 5, 12, 3, 31}, 45451},
    {{16, 16, 8, 21, 24, 31, 9, 21}, {30, 14, 19, 19, 29, 15, 7, 1}, 71570},
    {{25, 13, 21, 3, 25, 1, 25, 21}, {11, 24, 20, 30, 14, 14, 22, 11}, 67622},
    {{17, 9, 16, 23, 4, 21, 17, 14}, {10, 5, 26, 7, 27, 3, 5, 2}, 38887},
};

long long cube_sum(const std::vector<long long>& values) {
    long long sum = 0;
    for (long long v : values) sum += v * v * v;
    return sum;
}

SpinConfig bits_to_spins(const std::vector<int>& bits) {
    SpinConfig s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1 : -1;
    return s;
}

}  // namespace

TEST_CASE("decode_fixed_point: worked examples") {
    const FixedPointEncoding enc{1, 2, 10};
    CHECK(decode_fixed_point(std::vector<int>(13, 0), enc) == 0.0);
    // sign=1, int=01, frac=0100000000 -> -1.25
    CHECK(decode_fixed_point({1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}, enc) == -1.25);
    // sign=0, int=11, frac=1111111111 -> 4 - 2^-10
    CHECK(decode_fixed_point({0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, enc) == 3.9990234375);
    CHECK_THROWS_AS(decode_fixed_point({0, 1}, enc), std::invalid_argument);
}

TEST_CASE("decode_fixed_point: injective except the two zero representations") {
    const FixedPointEncoding enc{1, 1, 3};  // 32 bit patterns, exhaustive
    std::map<double, int> hits;
    for (int pattern = 0; pattern < 32; ++pattern) {
        std::vector<int> bits(5);
        for (int i = 0; i < 5; ++i) bits[i] = (pattern >> (4 - i)) & 1;
        ++hits[decode_fixed_point(bits, enc)];
    }
    for (const auto& [value, count] : hits) {
        if (value == 0.0)
            CHECK(count == 2);  // +0 and -0
        else
            CHECK(count == 1);
    }
}

TEST_CASE("u_kappa: known maxima and the origin") {
    CHECK(u_kappa(0.0, 0.0, 1.0) == 0.0);
    CHECK(u_kappa(0.68708, 0.170864, 1.0) == doctest::Approx(6.13506).epsilon(1e-5));
    CHECK(u_kappa(0.488397, 0.642488, 20.0) == doctest::Approx(6.23257).epsilon(1e-5));
}

TEST_CASE("u_kappa: oscillatory part is bounded by 6") {
    Rng rng(10);
    for (int i = 0; i < 5000; ++i) {
        const double x = 8.0 * uniform01(rng) - 4.0;
        const double y = 8.0 * uniform01(rng) - 4.0;
        const double kappa = 25.0 * uniform01(rng);
        const double base = 0.5 * (x * (1.0 - x) + y * (1.0 - y));
        CHECK(std::abs(u_kappa(x, y, kappa) - base) <= 6.0 + 1e-12);
    }
}

TEST_CASE("function_problem: the grid point nearest the optimum is a solution") {
    const ProblemSpec spec = function_problem(1.0, 6.13503);
    CHECK(spec.genotype_length == 26);
    // x = 704/1024 = 0.6875, y = 175/1024: nearest representable points
    // sign=0, int=00, frac of 0.6875*1024=704, then y sign=0, int=00, frac=175
    std::vector<int> bits;
    auto push_coord = [&bits](int frac) {
        bits.push_back(0);  // sign
        bits.push_back(0);
        bits.push_back(0);  // integer part 0
        for (int i = 9; i >= 0; --i) bits.push_back((frac >> i) & 1);
    };
    push_coord(704);
    push_coord(175);
    const SpinConfig genotype = bits_to_spins(bits);
    const Phenotype p = spec.decode(genotype);
    CHECK(p[0] == 0.6875);
    CHECK(p[1] == doctest::Approx(175.0 / 1024.0));
    CHECK(spec.is_solution(p));

    const Phenotype origin = spec.decode(SpinConfig(26, -1));
    CHECK(spec.fitness(origin) == 0.0);
    CHECK_FALSE(spec.is_solution(origin));
}

TEST_CASE("function_problem: kappa=20 solution grid point") {
    const ProblemSpec spec = function_problem(20.0, 6.23);
    std::vector<int> bits;
    auto push_coord = [&bits](int frac) {
        bits.push_back(0);
        bits.push_back(0);
        bits.push_back(0);
        for (int i = 9; i >= 0; --i) bits.push_back((frac >> i) & 1);
    };
    push_coord(500);  // 0.48828125, nearest to 0.488397
    push_coord(658);  // 0.642578125, nearest to 0.642488
    const Phenotype p = spec.decode(bits_to_spins(bits));
    CHECK(spec.is_solution(p));
}

TEST_CASE("function_problem: a threshold above the global maximum has no solutions") {
    // certify on a grid with a Lipschitz margin: |dU/dx|,|dU/dy| <= 76.5 on
    // the domain for kappa=1, so a 0.002 grid bounds the true max within
    // 76.5 * 0.002 = 0.153 of the grid max
    const double threshold = 6.5;
    double grid_max = -1e9;
    const int steps = 4000;
    for (int i = 0; i <= steps; ++i) {
        const double x = -4.0 + 8.0 * i / steps;
        for (int j = 0; j <= steps; ++j) {
            const double y = -4.0 + 8.0 * j / steps;
            const double u = u_kappa(x, y, 1.0);
            if (u > grid_max) grid_max = u;
        }
    }
    CHECK(grid_max + 0.153 < threshold);
    const ProblemSpec spec = function_problem(1.0, threshold);
    Rng rng(77);
    for (int i = 0; i < 2000; ++i) {
        SpinConfig g(26);
        for (auto& v : g) v = coin_flip(rng) ? 1 : -1;
        CHECK_FALSE(spec.is_solution(spec.decode(g)));
    }
}

TEST_CASE("taxicab_fitness: solved instances score zero, mismatches negative") {
    CHECK(taxicab_fitness({1, 12}, {9, 10}, 1e6) == 0.0);
    CHECK(taxicab_fitness({9, 15}, {16, 2}, 1e6) == 0.0);
    // (2 - 9)^2 = 49 and two collisions on the value 1
    CHECK(taxicab_fitness({1, 1}, {1, 2}, 1e6) == -49.0 - 2e6);
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        std::vector<long long> a(3), b(3);
        for (auto& v : a) v = uniform_int(rng, 32);
        for (auto& v : b) v = uniform_int(rng, 32);
        CHECK(taxicab_fitness(a, b, 1e6) <= 0.0);
    }
}

TEST_CASE("verify_taxicab: fixtures balance with disjoint sides") {
    for (const auto& fixture : kCubeFixtures) {
        CHECK(cube_sum(fixture.a) == fixture.sum);
        CHECK(cube_sum(fixture.b) == fixture.sum);
        CHECK(verify_taxicab(fixture.a, fixture.b));
    }
    CHECK_FALSE(verify_taxicab({1, 12}, {9, 12}));    // shared value
    CHECK_FALSE(verify_taxicab({1, 11}, {9, 10}));    // sums differ
}

TEST_CASE("verify_taxicab: invariant under side permutations and side swap") {
    Rng rng(13);
    const std::vector<long long> a = {13, 9, 8, 6, 8, 8}, b = {10, 2, 10, 11, 2, 11};
    std::vector<long long> pa = a, pb = b;
    for (int trial = 0; trial < 30; ++trial) {
        std::shuffle(pa.begin(), pa.end(), rng);
        std::shuffle(pb.begin(), pb.end(), rng);
        CHECK(verify_taxicab(pa, pb));
        CHECK(verify_taxicab(pb, pa));
    }
}

TEST_CASE("taxicab_problem: decode, fitness and solution predicate") {
    TaxicabSpec spec366;
    const ProblemSpec problem = taxicab_problem(spec366, 1e6);
    CHECK(problem.genotype_length == 60);

    // all-zero genotype: both sides all zeros, every pair collides
    const Phenotype zeros = problem.decode(SpinConfig(60, -1));
    CHECK(problem.fitness(zeros) == -1e6 * 36);
    CHECK_FALSE(problem.is_solution(zeros));

    // encode a known solution row and check it scores 0 and verifies
    const SpinConfig genotype =
        encode_taxicab_genotype({13, 9, 8, 6, 8, 8}, {10, 2, 10, 11, 2, 11});
    CHECK(static_cast<int>(genotype.size()) == problem.genotype_length);
    const Phenotype p = problem.decode(genotype);
    CHECK(problem.fitness(p) == 0.0);
    CHECK(problem.is_solution(p));
}

TEST_CASE("taxicab_problem: 5-bit decode covers 0..31 MSB first") {
    TaxicabSpec spec;
    spec.n_terms_a = 1;
    spec.n_terms_b = 1;
    const ProblemSpec problem = taxicab_problem(spec);
    for (long long v : {0LL, 1LL, 17LL, 31LL}) {
        const Phenotype p = problem.decode(encode_taxicab_genotype({v}, {v}));
        CHECK(p[0] == static_cast<double>(v));
        CHECK(p[1] == static_cast<double>(v));
    }
}

TEST_CASE("taxicab_bruteforce: (3,2,2) recovers the classic decompositions") {
    const auto small = taxicab_bruteforce(3, 2, 2, 12);
    REQUIRE(small.size() == 1);
    CHECK(small[0].value == 1729);
    CHECK(small[0].a == std::vector<long long>{1, 12});
    CHECK(small[0].b == std::vector<long long>{9, 10});

    const auto larger = taxicab_bruteforce(3, 2, 2, 16);
    bool found_4104 = false;
    for (const auto& sol : larger) {
        CHECK(verify_taxicab(sol.a, sol.b));
        if (sol.value == 4104) found_4104 = true;
    }
    CHECK(found_4104);
}

TEST_CASE("taxicab_bruteforce: no (3,1,2) numbers exist") {
    CHECK(taxicab_bruteforce(3, 1, 2, 31).empty());
}

TEST_CASE("taxicab_bruteforce: refuses oversized searches") {
    CHECK_THROWS_AS(taxicab_bruteforce(3, 8, 8, 1000), std::invalid_argument);
}
