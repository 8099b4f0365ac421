#pragma once

// Interchangeable annealer backends behind a single sampling contract:
//
//   classical-limit    reverse reads that flip each initialized spin
//                      independently at a fixed rate; ignores h and J.
//   thermal-surrogate  Metropolis dynamics on the classical Ising energy at
//                      an effective temperature T_eff(s(t)) that follows the
//                      anneal schedule. The drop of s below 1 stands in for
//                      quantum fluctuation strength.
//   quantum-exact      exact Schrodinger evolution (small systems only),
//                      reads sampled from the final measurement distribution.
//
// In reverse mode the thermal surrogate sweeps only until the trailing
// readout ramp begins. Sweeping through that ramp would cool the chain back
// into its initialization basin and erase exactly the fluctuations the
// reverse anneal is meant to inject; the physical counterpart is a readout
// ramp that is fast compared to the system dynamics.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqaa/ising.hpp"
#include "gqaa/quantum_exact.hpp"
#include "gqaa/rng.hpp"
#include "gqaa/schedule.hpp"

namespace gqaa {

enum class BackendVariant { classical_limit, thermal_surrogate, quantum_exact };

inline std::string to_string(BackendVariant v) {
    switch (v) {
        case BackendVariant::classical_limit: return "classical-limit";
        case BackendVariant::thermal_surrogate: return "thermal-surrogate";
        case BackendVariant::quantum_exact: return "quantum-exact";
    }
    return "?";
}

struct BackendParams {
    BackendVariant variant = BackendVariant::thermal_surrogate;
    double flip_rate = 0.05;    // classical-limit only
    double t0 = 0.4;            // temperature scale of T_eff(s) = t0 * (1 - s)
    double sweeps_per_us = 1.0; // thermal-surrogate
    double step_us = 0.0;       // quantum-exact integration step; <= 0 auto-refines
    std::uint64_t seed = 0;

    void validate() const {
        if (flip_rate < 0.0 || flip_rate > 1.0)
            throw std::invalid_argument("BackendParams: flip_rate must lie in [0,1]");
        if (t0 < 0.0) throw std::invalid_argument("BackendParams: t0 must be non-negative");
        if (sweeps_per_us <= 0.0)
            throw std::invalid_argument("BackendParams: sweeps_per_us must be positive");
    }
};

// Effective temperature standing in for quantum fluctuation strength:
// monotone non-increasing in s and exactly zero at s=1.
inline double effective_temperature(double s, double t0) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("effective_temperature: s must lie in [0,1]");
    return t0 * (1.0 - s);
}

// Solves 1 / (1 + exp(2*h_mod / T)) = target_rate for T: the temperature at
// which a lone spin with bias magnitude h_mod flips away from its preferred
// value with the requested probability. Only rates below 1/2 are reachable
// at positive temperature.
inline double calibrate_mutation(double target_rate, double h_mod) {
    if (target_rate <= 0.0 || target_rate >= 0.5)
        throw std::invalid_argument("calibrate_mutation: target_rate must lie in (0, 0.5)");
    if (h_mod <= 0.0) throw std::invalid_argument("calibrate_mutation: h_mod must be positive");
    return 2.0 * h_mod / std::log(1.0 / target_rate - 1.0);
}

namespace detail {

struct NeighborIndex {
    std::vector<int> offsets;      // size n+1
    std::vector<int> neighbor;     // flattened adjacency
    std::vector<double> strength;  // J value per adjacency entry

    explicit NeighborIndex(const IsingProblem& p) {
        std::vector<int> degree(p.n_spins, 0);
        for (const auto& [pair, v] : p.j) {
            (void)v;
            ++degree[pair.first];
            ++degree[pair.second];
        }
        offsets.assign(p.n_spins + 1, 0);
        for (int i = 0; i < p.n_spins; ++i) offsets[i + 1] = offsets[i] + degree[i];
        neighbor.resize(offsets.back());
        strength.resize(offsets.back());
        std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
        for (const auto& [pair, v] : p.j) {
            neighbor[cursor[pair.first]] = pair.second;
            strength[cursor[pair.first]++] = v;
            neighbor[cursor[pair.second]] = pair.first;
            strength[cursor[pair.second]++] = v;
        }
    }

    double local_field(const IsingProblem& p, const SpinConfig& s, int i) const {
        double f = p.h[i];
        for (int k = offsets[i]; k < offsets[i + 1]; ++k) f += strength[k] * s[neighbor[k]];
        return f;
    }
};

inline SpinConfig thermal_read(const IsingProblem& p, const NeighborIndex& adj, const SpinConfig& init,
                               const AnnealSchedule& sched, const BackendParams& params, Rng& rng) {
    SpinConfig state = init;
    if (p.n_spins == 0) return state;
    const double t_begin = sched.t_begin();
    const double t_cut = sched.mode == AnnealMode::reverse ? sched.readout_ramp_begin() : sched.t_end();
    const double span = t_cut - t_begin;
    // one sweep is n_spins proposals; fractional sweep densities are allowed
    const long long n_proposals = std::llround(params.sweeps_per_us * span * p.n_spins);
    for (long long k = 0; k < n_proposals; ++k) {
        const double t = t_begin + (k + 0.5) * span / n_proposals;
        const double temp = effective_temperature(sched.s_at(t), params.t0);
        const int i = uniform_int(rng, p.n_spins);
        const double delta_e = -2.0 * state[i] * adj.local_field(p, state, i);
        bool accept;
        if (delta_e < 0.0)
            accept = true;
        else if (temp <= 0.0)
            accept = false;  // zero temperature: strict descent, ties rejected
        else
            accept = uniform01(rng) < std::exp(-delta_e / temp);
        if (accept) state[i] = static_cast<std::int8_t>(-state[i]);
    }
    return state;
}

}  // namespace detail

// The annealer operation: run the schedule `reads` times and return one
// spin configuration per read. Reverse mode starts from `init`; forward
// mode ignores it (and is refused for the classical-limit backend, whose
// definition only makes sense as a perturbation of an initialized state).
inline std::vector<SpinConfig> sample(const IsingProblem& problem, const SpinConfig& init,
                                      const AnnealSchedule& schedule, int reads,
                                      const BackendParams& params) {
    params.validate();
    schedule.validate();
    if (reads < 1) throw std::invalid_argument("sample: reads must be >= 1");
    if (schedule.mode == AnnealMode::reverse || params.variant != BackendVariant::quantum_exact)
        check_spin_config(problem, init, "sample");

    Rng rng(params.seed);
    std::vector<SpinConfig> out;
    out.reserve(reads);

    switch (params.variant) {
        case BackendVariant::classical_limit: {
            if (schedule.mode == AnnealMode::forward)
                throw std::invalid_argument("sample: classical-limit backend is defined only for reverse reads");
            for (int r = 0; r < reads; ++r) {
                SpinConfig s = init;
                for (auto& v : s)
                    if (uniform01(rng) < params.flip_rate) v = static_cast<std::int8_t>(-v);
                out.push_back(std::move(s));
            }
            break;
        }
        case BackendVariant::thermal_surrogate: {
            detail::NeighborIndex adj(problem);
            for (int r = 0; r < reads; ++r)
                out.push_back(detail::thermal_read(problem, adj, init, schedule, params, rng));
            break;
        }
        case BackendVariant::quantum_exact: {
            const SpinConfig* init_ptr = schedule.mode == AnnealMode::reverse ? &init : nullptr;
            const QuantumOutcome outcome = evolve_quantum_exact(problem, init_ptr, schedule, params.step_us);
            for (int r = 0; r < reads; ++r) out.push_back(outcome.sample(rng));
            break;
        }
    }
    return out;
}

}  // namespace gqaa
