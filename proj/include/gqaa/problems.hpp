#pragma once

// Benchmark problems behind a small decode / fitness / is_solution
// interface. Spins convert to bits via tau = (1 + sigma) / 2; phenotypes
// are plain real vectors (coordinates for the function problem, integer
// values for the Diophantine one).

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqaa/ising.hpp"

namespace gqaa {

using Phenotype = std::vector<double>;

struct ProblemSpec {
    int genotype_length = 0;
    std::function<Phenotype(const SpinConfig&)> decode;
    std::function<double(const Phenotype&)> fitness;
    std::function<bool(const Phenotype&)> is_solution;
    std::string name;
};

inline double evaluate(const ProblemSpec& problem, const SpinConfig& genotype) {
    return problem.fitness(problem.decode(genotype));
}

inline std::vector<int> spins_to_bits(const SpinConfig& s) {
    std::vector<int> bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) bits[i] = (1 + s[i]) / 2;
    return bits;
}

// ---------------------------------------------------------------------------
// fixed-point encoding
// ---------------------------------------------------------------------------

struct FixedPointEncoding {
    int sign_bits = 1;  // 0 or 1
    int int_bits = 2;
    int frac_bits = 10;

    int total_bits() const { return sign_bits + int_bits + frac_bits; }
};

// Sign-magnitude fixed point, most significant bit first:
// value = (-1)^sign * (integer_part + fraction / 2^frac_bits).
inline double decode_fixed_point(const std::vector<int>& bits, const FixedPointEncoding& enc) {
    if (static_cast<int>(bits.size()) != enc.total_bits())
        throw std::invalid_argument("decode_fixed_point: got " + std::to_string(bits.size()) +
                                    " bits, expected " + std::to_string(enc.total_bits()));
    std::size_t pos = 0;
    bool negative = false;
    if (enc.sign_bits == 1) negative = bits[pos++] != 0;
    long long integer = 0;
    for (int i = 0; i < enc.int_bits; ++i) integer = (integer << 1) | bits[pos++];
    long long fraction = 0;
    for (int i = 0; i < enc.frac_bits; ++i) fraction = (fraction << 1) | bits[pos++];
    const double magnitude = static_cast<double>(integer) +
                             static_cast<double>(fraction) / std::pow(2.0, enc.frac_bits);
    return negative ? -magnitude : magnitude;
}

// ---------------------------------------------------------------------------
// 2-D function optimization
// ---------------------------------------------------------------------------

// The test landscape: a shallow polynomial bowl plus an oscillatory term
// whose frequency grows with kappa, so larger kappa means more local maxima.
inline double u_kappa(double x, double y, double kappa) {
    return 0.5 * (x * (1.0 - x) + y * (1.0 - y) + 12.0 * std::cos(kappa * x * y) * std::sin(2.0 * x + y));
}

// Two coordinates, each one sign bit + 2 integer bits + 10 fractional bits,
// covering (-4, 4)^2. A genotype is a solution when the function value
// clears the threshold.
inline ProblemSpec function_problem(double kappa, double threshold) {
    const FixedPointEncoding enc{1, 2, 10};
    const int per_coord = enc.total_bits();
    ProblemSpec spec;
    spec.genotype_length = 2 * per_coord;
    spec.name = "function(kappa=" + std::to_string(kappa) + ")";
    spec.decode = [enc, per_coord](const SpinConfig& s) {
        const std::vector<int> bits = spins_to_bits(s);
        const std::vector<int> xb(bits.begin(), bits.begin() + per_coord);
        const std::vector<int> yb(bits.begin() + per_coord, bits.end());
        return Phenotype{decode_fixed_point(xb, enc), decode_fixed_point(yb, enc)};
    };
    spec.fitness = [kappa](const Phenotype& p) { return u_kappa(p[0], p[1], kappa); };
    spec.is_solution = [kappa, threshold](const Phenotype& p) { return u_kappa(p[0], p[1], kappa) > threshold; };
    return spec;
}

// ---------------------------------------------------------------------------
// Taxicab (k, m, n) Diophantine problems
// ---------------------------------------------------------------------------

struct TaxicabSpec {
    int power = 3;
    int n_terms_a = 6;
    int n_terms_b = 6;
    int bits_per_integer = 5;  // values 0..31
};

inline long long int_pow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Squared mismatch of the cube sums plus a penalty for every (i, j) pair
// with a_i == b_j. Always <= 0; exactly 0 iff the sums match with no
// value shared across the sides.
inline double taxicab_fitness(const std::vector<long long>& a, const std::vector<long long>& b,
                              double penalty_weight, int power = 3) {
    long long sum_a = 0, sum_b = 0;
    for (long long v : a) sum_a += int_pow(v, power);
    for (long long v : b) sum_b += int_pow(v, power);
    const double diff = static_cast<double>(sum_a - sum_b);
    int collisions = 0;
    for (long long va : a)
        for (long long vb : b)
            if (va == vb) ++collisions;
    return -diff * diff - penalty_weight * collisions;
}

inline bool verify_taxicab(const std::vector<long long>& a, const std::vector<long long>& b, int power = 3) {
    long long sum_a = 0, sum_b = 0;
    for (long long v : a) sum_a += int_pow(v, power);
    for (long long v : b) sum_b += int_pow(v, power);
    if (sum_a != sum_b) return false;
    for (long long va : a)
        for (long long vb : b)
            if (va == vb) return false;
    return true;
}

inline ProblemSpec taxicab_problem(const TaxicabSpec& spec, double penalty_weight = 1e6) {
    const int bits = spec.bits_per_integer;
    const int n = spec.n_terms_a, m = spec.n_terms_b;
    ProblemSpec problem;
    problem.genotype_length = bits * (n + m);
    problem.name = "taxicab(" + std::to_string(spec.power) + "," + std::to_string(n) + "," + std::to_string(m) + ")";
    problem.decode = [bits, n, m](const SpinConfig& s) {
        const std::vector<int> all_bits = spins_to_bits(s);
        Phenotype values;
        values.reserve(n + m);
        for (int g = 0; g < n + m; ++g) {
            long long v = 0;
            for (int i = 0; i < bits; ++i) v = (v << 1) | all_bits[g * bits + i];
            values.push_back(static_cast<double>(v));
        }
        return values;
    };
    const int power = spec.power;
    auto split = [n, m](const Phenotype& p) {
        std::vector<long long> a, b;
        a.reserve(n);
        b.reserve(m);
        for (int i = 0; i < n; ++i) a.push_back(static_cast<long long>(p[i]));
        for (int i = 0; i < m; ++i) b.push_back(static_cast<long long>(p[n + i]));
        return std::make_pair(a, b);
    };
    problem.fitness = [split, penalty_weight, power](const Phenotype& p) {
        auto [a, b] = split(p);
        return taxicab_fitness(a, b, penalty_weight, power);
    };
    problem.is_solution = [split, power](const Phenotype& p) {
        auto [a, b] = split(p);
        return verify_taxicab(a, b, power);
    };
    return problem;
}

// Encodes integer values into the spin genotype layout of taxicab_problem.
inline SpinConfig encode_taxicab_genotype(const std::vector<long long>& a, const std::vector<long long>& b,
                                          int bits_per_integer = 5) {
    SpinConfig s;
    auto push = [&](long long v) {
        for (int i = bits_per_integer - 1; i >= 0; --i)
            s.push_back((v >> i) & 1 ? 1 : -1);
    };
    for (long long v : a) push(v);
    for (long long v : b) push(v);
    return s;
}

struct TaxicabSolution {
    long long value = 0;
    std::vector<long long> a, b;
};

// Exhaustive meet-in-the-middle oracle: enumerates non-decreasing value
// tuples per side, joins them on equal power sums, and keeps disjoint
// pairs. Results are canonical (sides sorted; for equal side lengths the
// lexicographically smaller side first) and deduplicated.
inline std::vector<TaxicabSolution> taxicab_bruteforce(int power, int n, int m, long long max_value) {
    if (power < 1 || n < 1 || m < 1 || max_value < 0)
        throw std::invalid_argument("taxicab_bruteforce: invalid arguments");

    auto tuple_count = [max_value](int terms) {
        // C(max_value + terms, terms), saturating
        double c = 1.0;
        for (int i = 1; i <= terms; ++i) c *= static_cast<double>(max_value + i) / i;
        return c;
    };
    if (tuple_count(n) + tuple_count(m) > 1e8)
        throw std::invalid_argument("taxicab_bruteforce: search space exceeds the 1e8 tuple budget");

    // visit every non-decreasing tuple of the given length over 0..max_value
    auto for_each_tuple = [power, max_value](int terms, auto&& visit) {
        std::vector<long long> tuple(terms, 0);
        while (true) {
            long long sum = 0;
            for (long long v : tuple) sum += int_pow(v, power);
            visit(sum, tuple);
            int pos = terms - 1;
            while (pos >= 0 && tuple[pos] == max_value) --pos;
            if (pos < 0) break;
            ++tuple[pos];
            for (int i = pos + 1; i < terms; ++i) tuple[i] = tuple[pos];
        }
    };

    // store the smaller side, stream the other against it
    const bool store_a = tuple_count(n) <= tuple_count(m);
    const int stored_terms = store_a ? n : m;
    const int streamed_terms = store_a ? m : n;
    std::map<long long, std::vector<std::vector<long long>>> stored;
    for_each_tuple(stored_terms,
                   [&](long long sum, const std::vector<long long>& t) { stored[sum].push_back(t); });

    std::set<std::pair<std::vector<long long>, std::vector<long long>>> seen;
    std::vector<TaxicabSolution> out;
    for_each_tuple(streamed_terms, [&](long long sum, const std::vector<long long>& t) {
        auto it = stored.find(sum);
        if (it == stored.end()) return;
        for (const auto& partner : it->second) {
            const auto& a = store_a ? partner : t;
            const auto& b = store_a ? t : partner;
            if (!verify_taxicab(a, b, power)) continue;
            auto key = std::make_pair(a, b);
            if (n == m && b < a) key = std::make_pair(b, a);
            if (seen.insert(key).second) out.push_back({sum, key.first, key.second});
        }
    });
    return out;
}

}  // namespace gqaa
