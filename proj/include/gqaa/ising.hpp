#pragma once

// Classical Ising data model: linear biases h, sparse pairwise couplings J,
// spin configurations, energy evaluation, and a small brute-force
// ground-state oracle.
//
// Sign conventions used throughout:
//   E(sigma) = sum_l h_l sigma_l + sum_{l<m} J_lm sigma_l sigma_m
//   negative J  -> ferromagnetic (aligned spins lower the energy)
//   classical genotype sigma_l = -sign(h_l)

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gqaa/rng.hpp"

namespace gqaa {

using SpinConfig = std::vector<std::int8_t>;

inline SpinConfig negated(const SpinConfig& s) {
    SpinConfig out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<std::int8_t>(-s[i]);
    return out;
}

struct IsingProblem {
    int n_spins = 0;
    std::vector<double> h;
    // One entry per unordered pair, keyed (i, j) with i < j. Ordered map so
    // iteration (and therefore serialization) is deterministic.
    std::map<std::pair<int, int>, double> j;

    IsingProblem() = default;
    explicit IsingProblem(int n) : n_spins(n), h(n, 0.0) {
        if (n < 0) throw std::invalid_argument("IsingProblem: negative spin count");
    }

    static IsingProblem from_biases(std::vector<double> biases) {
        IsingProblem p(static_cast<int>(biases.size()));
        p.h = std::move(biases);
        return p;
    }

    void set_coupling(int a, int b, double value) {
        if (a == b) throw std::invalid_argument("IsingProblem: self-coupling (" + std::to_string(a) + "," + std::to_string(b) + ") forbidden");
        if (a < 0 || b < 0 || a >= n_spins || b >= n_spins)
            throw std::invalid_argument("IsingProblem: coupling index out of range");
        if (a > b) std::swap(a, b);
        j[{a, b}] = value;
    }

    double coupling(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = j.find({a, b});
        return it == j.end() ? 0.0 : it->second;
    }
};

inline void check_spin_config(const IsingProblem& p, const SpinConfig& s, const char* where) {
    if (static_cast<int>(s.size()) != p.n_spins)
        throw std::invalid_argument(std::string(where) + ": spin configuration length " +
                                    std::to_string(s.size()) + " does not match problem size " +
                                    std::to_string(p.n_spins));
    for (std::int8_t v : s)
        if (v != 1 && v != -1)
            throw std::invalid_argument(std::string(where) + ": spin value must be +1 or -1");
}

inline double energy(const IsingProblem& p, const SpinConfig& s) {
    check_spin_config(p, s, "energy");
    double e = 0.0;
    for (int l = 0; l < p.n_spins; ++l) e += p.h[l] * s[l];
    for (const auto& [pair, v] : p.j) e += v * s[pair.first] * s[pair.second];
    return e;
}

// The spin state the biases alone would enforce: sigma_l = -sign(h_l).
// Zero bias carries no preference and is resolved by a fair coin.
inline SpinConfig classical_genotype(const std::vector<double>& h, Rng& tie_rng) {
    SpinConfig s(h.size());
    for (std::size_t l = 0; l < h.size(); ++l) {
        if (h[l] < 0.0)
            s[l] = 1;
        else if (h[l] > 0.0)
            s[l] = -1;
        else
            s[l] = coin_flip(tie_rng) ? 1 : -1;
    }
    return s;
}

// Exhaustive minimizer over all 2^n configurations. Test oracle only;
// refuses anything past 24 spins. Configuration index maps to spins via
// bit l of the index: tau_l = (index >> l) & 1, sigma_l = 2*tau_l - 1.
// Ties keep the lowest index (strict improvement required to replace).
inline std::pair<SpinConfig, double> ground_state_bruteforce(const IsingProblem& p) {
    if (p.n_spins > 24)
        throw std::invalid_argument("ground_state_bruteforce: refusing " +
                                    std::to_string(p.n_spins) + " spins (limit 24)");
    const std::uint32_t count = 1u << p.n_spins;
    SpinConfig s(p.n_spins), best(p.n_spins, -1);
    double best_e = 0.0;
    bool first = true;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        for (int l = 0; l < p.n_spins; ++l)
            s[l] = (mask >> l) & 1 ? 1 : -1;
        const double e = energy(p, s);
        if (first || e < best_e) {
            best = s;
            best_e = e;
            first = false;
        }
    }
    return {best, best_e};
}

}  // namespace gqaa
