#pragma once

// Exact unitary evolution of the anneal Hamiltonian
//
//   H(s) = A(s) sum_l sigma_x_l + B(s) (sum_l h_l sigma_z_l + sum_{lm} J_lm sigma_z_l sigma_z_m)
//
// with the linear envelope model A(s) = 1-s, B(s) = s. The coupling graph is
// split into connected components, each component is evolved on its own
// state vector, and the measurement distribution is the product over
// components. Verification backend: refuses components larger than 16 spins.
//
// Integration uses Strang splitting: a half-step of the diagonal part, a
// full step of the transverse part (an exact product of single-qubit x
// rotations), and another diagonal half-step. Every factor is unitary, so
// the norm is conserved to rounding.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqaa/ising.hpp"
#include "gqaa/rng.hpp"
#include "gqaa/schedule.hpp"

namespace gqaa {

inline std::vector<std::vector<int>> connected_components(const IsingProblem& p) {
    std::vector<int> parent(p.n_spins);
    for (int i = 0; i < p.n_spins; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [pair, v] : p.j) {
        (void)v;
        int a = find(pair.first), b = find(pair.second);
        if (a != b) parent[a] = b;
    }
    std::vector<std::vector<int>> groups(p.n_spins);
    for (int i = 0; i < p.n_spins; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    return out;
}

struct QuantumOutcome {
    struct Component {
        std::vector<int> spins;     // global spin indices, ascending
        std::vector<double> probs;  // over 2^k local basis states; bit l of the
                                    // index is tau for spins[l], sigma = 2*tau - 1
    };
    int n_spins = 0;
    std::vector<Component> components;
    double max_norm_drift = 0.0;  // worst | ||psi||^2 - 1 | seen while integrating

    double probability_of(const SpinConfig& config) const {
        if (static_cast<int>(config.size()) != n_spins)
            throw std::invalid_argument("QuantumOutcome: config length mismatch");
        double prob = 1.0;
        for (const auto& comp : components) {
            std::size_t idx = 0;
            for (std::size_t l = 0; l < comp.spins.size(); ++l)
                if (config[comp.spins[l]] > 0) idx |= (std::size_t{1} << l);
            prob *= comp.probs[idx];
        }
        return prob;
    }

    SpinConfig sample(Rng& rng) const {
        SpinConfig out(n_spins, -1);
        for (const auto& comp : components) {
            const double u = uniform01(rng);
            double acc = 0.0;
            std::size_t idx = comp.probs.size() - 1;
            for (std::size_t b = 0; b < comp.probs.size(); ++b) {
                acc += comp.probs[b];
                if (u < acc) {
                    idx = b;
                    break;
                }
            }
            for (std::size_t l = 0; l < comp.spins.size(); ++l)
                out[comp.spins[l]] = (idx >> l) & 1 ? 1 : -1;
        }
        return out;
    }
};

namespace detail {

struct ComponentSystem {
    int n = 0;
    std::vector<double> diag_energy;  // E_z per basis state
    std::size_t init_index = 0;
    bool forward = false;
};

inline std::vector<double> evolve_component_fixed(const ComponentSystem& sys, const AnnealSchedule& sched,
                                                  int n_steps, double* norm_drift) {
    const std::size_t dim = std::size_t{1} << sys.n;
    std::vector<std::complex<double>> psi(dim, 0.0);
    if (sys.forward) {
        // Ground state of +A*sum sigma_x: product of single-qubit |-> states.
        const double amp = std::pow(2.0, -0.5 * sys.n);
        for (std::size_t b = 0; b < dim; ++b)
            psi[b] = (std::popcount(b) & 1) ? -amp : amp;
    } else {
        psi[sys.init_index] = 1.0;
    }

    const double t0 = sched.t_begin();
    const double dt = (sched.t_end() - t0) / n_steps;
    const std::complex<double> mi(0.0, -1.0);
    for (int step = 0; step < n_steps; ++step) {
        const double s = sched.s_at(t0 + (step + 0.5) * dt);
        const double a = 1.0 - s;
        const double b = s;
        // half-step of the diagonal part
        for (std::size_t k = 0; k < dim; ++k)
            psi[k] *= std::exp(mi * (0.5 * b * sys.diag_energy[k] * dt));
        // exact transverse rotation, one qubit at a time
        if (a != 0.0) {
            const double theta = a * dt;
            const double c = std::cos(theta), sn = std::sin(theta);
            for (int q = 0; q < sys.n; ++q) {
                const std::size_t bit = std::size_t{1} << q;
                for (std::size_t k = 0; k < dim; ++k) {
                    if (k & bit) continue;
                    const std::complex<double> c0 = psi[k], c1 = psi[k | bit];
                    psi[k] = c * c0 + mi * sn * c1;
                    psi[k | bit] = mi * sn * c0 + c * c1;
                }
            }
        }
        for (std::size_t k = 0; k < dim; ++k)
            psi[k] *= std::exp(mi * (0.5 * b * sys.diag_energy[k] * dt));
        if (norm_drift && (step % 64 == 0 || step == n_steps - 1)) {
            double norm = 0.0;
            for (const auto& c : psi) norm += std::norm(c);
            *norm_drift = std::max(*norm_drift, std::abs(norm - 1.0));
        }
    }

    std::vector<double> probs(dim);
    for (std::size_t k = 0; k < dim; ++k) probs[k] = std::norm(psi[k]);
    return probs;
}

}  // namespace detail

// Evolves the schedule on every coupling component and returns the exact
// measurement distribution of the final state. `init` is required in
// reverse mode and ignored in forward mode. A step_us <= 0 requests
// automatic refinement: the step is halved until the outcome probabilities
// move by less than 1e-6.
inline QuantumOutcome evolve_quantum_exact(const IsingProblem& p, const SpinConfig* init,
                                           const AnnealSchedule& sched, double step_us = 0.0) {
    sched.validate();
    const bool forward = sched.mode == AnnealMode::forward;
    if (!forward) {
        if (!init) throw std::invalid_argument("evolve_quantum_exact: reverse mode requires an initial configuration");
        check_spin_config(p, *init, "evolve_quantum_exact");
    }

    QuantumOutcome out;
    out.n_spins = p.n_spins;
    for (const auto& group : connected_components(p)) {
        if (group.size() > 16)
            throw std::invalid_argument("evolve_quantum_exact: component of " +
                                        std::to_string(group.size()) + " spins exceeds the 16-spin limit");
        detail::ComponentSystem sys;
        sys.n = static_cast<int>(group.size());
        sys.forward = forward;
        std::vector<int> local_of(p.n_spins, -1);
        for (int l = 0; l < sys.n; ++l) local_of[group[l]] = l;

        const std::size_t dim = std::size_t{1} << sys.n;
        sys.diag_energy.assign(dim, 0.0);
        for (std::size_t b = 0; b < dim; ++b) {
            double e = 0.0;
            for (int l = 0; l < sys.n; ++l) {
                const int sigma = (b >> l) & 1 ? 1 : -1;
                e += p.h[group[l]] * sigma;
            }
            sys.diag_energy[b] = e;
        }
        for (const auto& [pair, v] : p.j) {
            const int la = local_of[pair.first], lb = local_of[pair.second];
            if (la < 0 || lb < 0) continue;  // edge belongs to another component
            for (std::size_t b = 0; b < dim; ++b) {
                const int sa = (b >> la) & 1 ? 1 : -1;
                const int sb = (b >> lb) & 1 ? 1 : -1;
                sys.diag_energy[b] += v * sa * sb;
            }
        }
        if (!forward) {
            for (int l = 0; l < sys.n; ++l)
                if ((*init)[group[l]] > 0) sys.init_index |= (std::size_t{1} << l);
        }

        const double span = sched.t_end() - sched.t_begin();
        QuantumOutcome::Component comp;
        comp.spins = group;
        if (step_us > 0.0) {
            const int n_steps = std::max(1, static_cast<int>(std::ceil(span / step_us)));
            comp.probs = detail::evolve_component_fixed(sys, sched, n_steps, &out.max_norm_drift);
        } else {
            int n_steps = 1024;
            std::vector<double> coarse = detail::evolve_component_fixed(sys, sched, n_steps, &out.max_norm_drift);
            for (int round = 0; round < 14; ++round) {
                n_steps *= 2;
                std::vector<double> fine = detail::evolve_component_fixed(sys, sched, n_steps, &out.max_norm_drift);
                double delta = 0.0;
                for (std::size_t k = 0; k < fine.size(); ++k)
                    delta = std::max(delta, std::abs(fine[k] - coarse[k]));
                coarse = std::move(fine);
                if (delta < 1e-6) break;
            }
            comp.probs = std::move(coarse);
        }
        out.components.push_back(std::move(comp));
    }
    return out;
}

}  // namespace gqaa
