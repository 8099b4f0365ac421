#pragma once

// Polyandric coupling topologies. A ColumnGraph couples the same allele
// across individuals; expand_to_population stamps one copy of it into every
// allele column of the P x N population Ising model. Graph nodes are rank
// positions (0 = least fit, P-1 = fittest), not individual identities, and
// the graph is built once per run and never rebuilt across generations.
//
// Edge sign convention follows the energy model in ising.hpp: negative J is
// attractive (aligned spins lower the energy), positive J repulsive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqaa/ising.hpp"
#include "gqaa/rng.hpp"

namespace gqaa {

struct ColumnEdge {
    int a = 0, b = 0;
    double j = 0.0;
};

struct ColumnGraph {
    int n_nodes = 0;
    std::vector<ColumnEdge> edges;
};

enum class Topology { none, nearest_neighbor, islands };

inline std::string to_string(Topology t) {
    switch (t) {
        case Topology::none: return "none";
        case Topology::nearest_neighbor: return "nearest-neighbor";
        case Topology::islands: return "islands";
    }
    return "?";
}

struct PolyandryConfig {
    Topology topology = Topology::islands;
    double base_j = 0.07;     // |J| of ordinary edges
    double rho = 0.5;         // fraction of within-island edges made repulsive
    double rho_prime = 0.064; // fraction of the population hub-coupled to the fittest
    double kappa = -0.15;     // strength of the enhanced hub edges (attractive)
    int island_size = 5;
    std::uint64_t seed = 0;

    void validate() const {
        if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("PolyandryConfig: rho must lie in [0,1]");
        if (rho_prime < 0.0 || rho_prime > 1.0)
            throw std::invalid_argument("PolyandryConfig: rho_prime must lie in [0,1]");
        if (base_j <= 0.0) throw std::invalid_argument("PolyandryConfig: base_j must be positive");
        if (kappa > 0.0) throw std::invalid_argument("PolyandryConfig: kappa must be attractive (<= 0)");
        if (island_size < 2) throw std::invalid_argument("PolyandryConfig: island_size must be >= 2");
    }
};

// Path graph with uniformly attractive couplings.
inline ColumnGraph build_nearest_neighbor(int population, double base_j) {
    if (population < 2) throw std::invalid_argument("build_nearest_neighbor: need at least 2 individuals");
    if (base_j <= 0.0) throw std::invalid_argument("build_nearest_neighbor: base_j must be positive");
    ColumnGraph g;
    g.n_nodes = population;
    for (int i = 0; i + 1 < population; ++i) g.edges.push_back({i, i + 1, -base_j});
    return g;
}

// The islands topology: consecutive rank positions grouped into complete
// islands whose edges are repulsive with probability rho, plus enhanced
// attractive hub edges from the fittest rank position to ceil(rho_prime * P)
// weaker ones. A hub edge replaces any island edge on the same pair.
inline ColumnGraph build_islands(int population, const PolyandryConfig& cfg) {
    cfg.validate();
    if (population < cfg.island_size)
        throw std::invalid_argument("build_islands: island_size " + std::to_string(cfg.island_size) +
                                    " exceeds population " + std::to_string(population));
    Rng rng(cfg.seed);
    ColumnGraph g;
    g.n_nodes = population;
    for (int start = 0; start < population; start += cfg.island_size) {
        const int end = std::min(start + cfg.island_size, population);
        for (int a = start; a < end; ++a)
            for (int b = a + 1; b < end; ++b) {
                const double value = uniform01(rng) < cfg.rho ? cfg.base_j : -cfg.base_j;
                g.edges.push_back({a, b, value});
            }
    }

    const int hub = population - 1;
    const int n_hub_edges = static_cast<int>(std::ceil(cfg.rho_prime * population));
    if (n_hub_edges > 0) {
        // partial Fisher-Yates over the weaker rank positions
        std::vector<int> targets(population - 1);
        for (int i = 0; i < population - 1; ++i) targets[i] = i;
        const int take = std::min(n_hub_edges, population - 1);
        for (int i = 0; i < take; ++i)
            std::swap(targets[i], targets[i + uniform_int(rng, population - 1 - i)]);
        targets.resize(take);
        for (int t : targets) {
            bool replaced = false;
            for (auto& e : g.edges) {
                if ((e.a == t && e.b == hub) || (e.a == hub && e.b == t)) {
                    e.j = cfg.kappa;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) g.edges.push_back({std::min(t, hub), std::max(t, hub), cfg.kappa});
        }
    }
    return g;
}

inline ColumnGraph build_column_graph(int population, const PolyandryConfig& cfg) {
    switch (cfg.topology) {
        case Topology::none: return ColumnGraph{population, {}};
        case Topology::nearest_neighbor: return build_nearest_neighbor(population, cfg.base_j);
        case Topology::islands: return build_islands(population, cfg);
    }
    throw std::invalid_argument("build_column_graph: unknown topology");
}

// Expands a per-column graph plus a P x N matrix of biases into the full
// population Ising model. Spin (individual i, allele l) maps to index
// i*N + l; every allele column receives its own copy of the column edges,
// and there are no cross-allele couplings.
inline IsingProblem expand_to_population(const ColumnGraph& column, int n_alleles,
                                         const std::vector<std::vector<double>>& h_matrix) {
    if (static_cast<int>(h_matrix.size()) != column.n_nodes)
        throw std::invalid_argument("expand_to_population: h_matrix rows (" +
                                    std::to_string(h_matrix.size()) + ") must equal column nodes (" +
                                    std::to_string(column.n_nodes) + ")");
    for (const auto& row : h_matrix)
        if (static_cast<int>(row.size()) != n_alleles)
            throw std::invalid_argument("expand_to_population: h_matrix row length must equal allele count");

    IsingProblem p(column.n_nodes * n_alleles);
    for (int i = 0; i < column.n_nodes; ++i)
        for (int l = 0; l < n_alleles; ++l) p.h[i * n_alleles + l] = h_matrix[i][l];
    for (const auto& e : column.edges)
        for (int l = 0; l < n_alleles; ++l)
            p.set_coupling(e.a * n_alleles + l, e.b * n_alleles + l, e.j);
    return p;
}

}  // namespace gqaa
