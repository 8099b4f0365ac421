#pragma once

// Selection, breeding, nepotism, elitism, and the two top-level loops: the
// classical genetic algorithm and the genetic quantum annealing algorithm
// (GQAA), whose mutation stage is a reverse anneal of the population-wide
// Ising model through one of the backends.
//
// Ranking convention: rank 0 is the least fit individual, rank P-1 the
// fittest. Ties break by current population index (stable sort), so runs
// are deterministic in the seed.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gqaa/backends.hpp"
#include "gqaa/ising.hpp"
#include "gqaa/problems.hpp"
#include "gqaa/rng.hpp"
#include "gqaa/schedule.hpp"
#include "gqaa/topology.hpp"

namespace gqaa {

struct GaParams {
    int population = 30;       // P, even
    double alpha = 3.0;        // learning rate of ranked selection, > 1
    double alpha_p = 0.05;     // nepotism scale
    double mutation_rate = 0.05;  // classical GA only
    bool elitism = true;
    int elite_count = 0;       // members preserved across generations; 0 = population/10
    int max_generations = 1000;   // evaluated populations, initial one included
    std::uint64_t seed = 0;

    int effective_elite_count() const {
        if (!elitism) return 0;
        return elite_count > 0 ? elite_count : std::max(1, population / 10);
    }

    void validate() const {
        if (population < 2 || population % 2 != 0)
            throw std::invalid_argument("GaParams: population must be even and >= 2");
        if (alpha <= 1.0) throw std::invalid_argument("GaParams: alpha must be > 1");
        if (alpha_p <= 0.0) throw std::invalid_argument("GaParams: alpha_p must be positive");
        if (mutation_rate < 0.0 || mutation_rate > 1.0)
            throw std::invalid_argument("GaParams: mutation_rate must lie in [0,1]");
        if (elite_count < 0 || elite_count > population / 2)
            throw std::invalid_argument("GaParams: elite_count must lie in [0, population/2]");
        if (max_generations < 1) throw std::invalid_argument("GaParams: max_generations must be >= 1");
    }
};

struct RunResult {
    long long call_count = 0;
    int generations_used = 0;
    std::vector<double> best_fitness_per_generation;
    std::optional<Phenotype> solution;
    bool solved = false;
};

// Probability of the k-th ranked individual (k = 1 fittest) being selected
// for breeding: linear in rank, with the fittest exactly alpha times as
// likely as the least fit. Returned indexed k-1.
inline std::vector<double> selection_probabilities(int population, double alpha) {
    if (population < 2) throw std::invalid_argument("selection_probabilities: population must be >= 2");
    if (alpha <= 1.0) throw std::invalid_argument("selection_probabilities: alpha must be > 1");
    std::vector<double> p(population);
    const double scale = 2.0 / ((1.0 + alpha) * population);
    for (int k = 1; k <= population; ++k)
        p[k - 1] = scale * (1.0 + static_cast<double>(population - k) * (alpha - 1.0) / (population - 1));
    return p;
}

// P/2 breeding pairs of rank positions, drawn with replacement across
// pairs; the two parents within a pair are distinct (the second is redrawn
// on a collision). probs comes from selection_probabilities.
inline std::vector<std::pair<int, int>> select_pairs(const std::vector<double>& probs, Rng& rng) {
    const int population = static_cast<int>(probs.size());
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    auto draw_rank = [&]() {
        const double u = uniform01(rng) * cdf.back();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const int k = static_cast<int>(it - cdf.begin()) + 1;  // 1 = fittest
        return population - std::min(k, population);           // rank position
    };
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(population / 2);
    for (int i = 0; i < population / 2; ++i) {
        const int a = draw_rank();
        int b = draw_rank();
        while (b == a) b = draw_rank();
        pairs.emplace_back(a, b);
    }
    return pairs;
}

// Single-point crossover at a fixed cut: children swap tails. Allele values
// (and whatever weighting they carry) move verbatim.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> crossover_at(const std::vector<T>& parent_a,
                                                       const std::vector<T>& parent_b, int cut) {
    if (parent_a.size() != parent_b.size())
        throw std::invalid_argument("crossover: parents must have equal length");
    const int n = static_cast<int>(parent_a.size());
    if (n < 2) throw std::invalid_argument("crossover: need at least 2 alleles");
    if (cut < 1 || cut >= n) throw std::invalid_argument("crossover: cut must lie in [1, N-1]");
    std::vector<T> child_a(parent_a.begin(), parent_a.begin() + cut);
    child_a.insert(child_a.end(), parent_b.begin() + cut, parent_b.end());
    std::vector<T> child_b(parent_b.begin(), parent_b.begin() + cut);
    child_b.insert(child_b.end(), parent_a.begin() + cut, parent_a.end());
    return {std::move(child_a), std::move(child_b)};
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> crossover(const std::vector<T>& parent_a,
                                                    const std::vector<T>& parent_b, Rng& rng) {
    if (parent_a.size() != parent_b.size())
        throw std::invalid_argument("crossover: parents must have equal length");
    const int n = static_cast<int>(parent_a.size());
    if (n < 2) throw std::invalid_argument("crossover: need at least 2 alleles");
    return crossover_at(parent_a, parent_b, 1 + uniform_int(rng, n - 1));
}

// Classical mutation: flip each allele independently.
inline SpinConfig mutate(const SpinConfig& genotype, double rate, Rng& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutate: rate must lie in [0,1]");
    SpinConfig out = genotype;
    for (auto& v : out)
        if (uniform01(rng) < rate) v = static_cast<std::int8_t>(-v);
    return out;
}

// Bias magnitude per rank position: |h|_l = alpha_p ((alpha-1)/(P-1) l + 1),
// increasing with fitness so fit parents enforce their genotype harder.
// The least fit gets alpha_p, the fittest alpha_p * alpha.
inline std::vector<double> nepotism_weights(int population, double alpha, double alpha_p) {
    if (population < 2) throw std::invalid_argument("nepotism_weights: population must be >= 2");
    std::vector<double> w(population);
    for (int l = 0; l < population; ++l)
        w[l] = alpha_p * ((alpha - 1.0) * l / (population - 1) + 1.0);
    return w;
}

// Bias rows enforcing each ranked quantum-genotype with its rank's weight:
// h = -sigma * w, so classical_genotype(h) reproduces sigma. ranking[l] is
// the population index of the rank-l individual; the result is rank-ordered.
inline std::vector<std::vector<double>> build_parent_genotypes(const std::vector<SpinConfig>& quantum_genotypes,
                                                               const std::vector<int>& ranking,
                                                               const std::vector<double>& weights) {
    if (ranking.size() != quantum_genotypes.size() || weights.size() != quantum_genotypes.size())
        throw std::invalid_argument("build_parent_genotypes: population / ranking / weights size mismatch");
    std::vector<std::vector<double>> h(ranking.size());
    for (std::size_t l = 0; l < ranking.size(); ++l) {
        const SpinConfig& sigma = quantum_genotypes[ranking[l]];
        h[l].resize(sigma.size());
        for (std::size_t a = 0; a < sigma.size(); ++a) h[l][a] = -static_cast<double>(sigma[a]) * weights[l];
    }
    return h;
}

struct RunOptions {
    std::optional<std::vector<SpinConfig>> initial_population;
    bool stop_on_solution = true;
};

struct GqaaOptions : RunOptions {
    int read_pool = 1;           // annealer reads collected per generation
    double nepotism_alpha = 0.0; // 0 means: use params.alpha
};

namespace detail {

struct EvaluatedPopulation {
    std::vector<SpinConfig> genotypes;
    std::vector<double> fitness;
    std::vector<int> ranking;  // ranking[l] = population index of rank l (0 = least fit)
};

// Sorts indices by ascending fitness, ties by population index.
inline std::vector<int> rank_population(const std::vector<double>& fitness) {
    std::vector<int> ranking(fitness.size());
    std::iota(ranking.begin(), ranking.end(), 0);
    std::stable_sort(ranking.begin(), ranking.end(),
                     [&](int a, int b) { return fitness[a] < fitness[b]; });
    return ranking;
}

inline std::vector<SpinConfig> random_population(int population, int n_alleles, Rng& rng) {
    std::vector<SpinConfig> genotypes(population);
    for (auto& g : genotypes) {
        g.resize(n_alleles);
        for (auto& v : g) v = coin_flip(rng) ? 1 : -1;
    }
    return genotypes;
}

// Overwrites the least fit member with the previous best genotype. The
// elite's fitness is carried over (same genotype, deterministic fitness),
// so the replacement costs no extra fitness call.
inline void apply_elitism_inplace(std::vector<SpinConfig>& genotypes, std::vector<double>& fitness,
                                  const SpinConfig& prev_best_genotype, double prev_best_fitness) {
    const auto worst = std::min_element(fitness.begin(), fitness.end()) - fitness.begin();
    genotypes[worst] = prev_best_genotype;
    fitness[worst] = prev_best_fitness;
}

// Shared per-generation bookkeeping for both loops. Evaluates every member
// (P fitness calls), reinserts the elites of the previous generation over
// the weakest newcomers, ranks, records the best, and checks for a
// solution. Elite fitness values are carried, not re-evaluated, so
// call_count stays at P per generation.
struct GenerationLoop {
    const ProblemSpec& problem;
    const GaParams& params;
    bool stop_on_solution;
    RunResult result;
    std::vector<std::pair<double, SpinConfig>> elites;  // best-first snapshot of the last generation
    SpinConfig best_genotype;
    double best_fitness = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    explicit GenerationLoop(const ProblemSpec& problem_, const GaParams& params_, bool stop_on_solution_)
        : problem(problem_), params(params_), stop_on_solution(stop_on_solution_) {}

    // Returns true when the run should stop.
    bool evaluate(EvaluatedPopulation& pop) {
        const int population = params.population;
        pop.fitness.resize(population);
        for (int i = 0; i < population; ++i) pop.fitness[i] = gqaa::evaluate(problem, pop.genotypes[i]);
        result.call_count += population;
        ++result.generations_used;
        if (!elites.empty()) {
            const std::vector<int> order = rank_population(pop.fitness);
            for (std::size_t e = 0; e < elites.size(); ++e) {
                const int slot = order[e];  // e-th weakest newcomer
                if (pop.fitness[slot] < elites[e].first) {
                    pop.genotypes[slot] = elites[e].second;
                    pop.fitness[slot] = elites[e].first;
                }
            }
        }
        pop.ranking = rank_population(pop.fitness);
        const int fittest = pop.ranking.back();
        if (!have_best || pop.fitness[fittest] > best_fitness) {
            best_fitness = pop.fitness[fittest];
            best_genotype = pop.genotypes[fittest];
            have_best = true;
        }
        result.best_fitness_per_generation.push_back(best_fitness);
        if (stop_on_solution) {
            for (int i = 0; i < population; ++i) {
                const Phenotype phenotype = problem.decode(pop.genotypes[i]);
                if (problem.is_solution(phenotype)) {
                    result.solved = true;
                    result.solution = phenotype;
                    return true;
                }
            }
        }
        if (result.generations_used >= params.max_generations) return true;
        elites.clear();
        for (int e = 0; e < params.effective_elite_count(); ++e) {
            const int idx = pop.ranking[population - 1 - e];
            elites.emplace_back(pop.fitness[idx], pop.genotypes[idx]);
        }
        return false;
    }
};

}  // namespace detail

// Replaces the least fit quantum-genotype of an evaluated generation with a
// previous generation's best genotype, reusing its known fitness.
inline void apply_elitism(std::vector<SpinConfig>& genotypes, std::vector<double>& fitness,
                          const SpinConfig& prev_best_genotype, double prev_best_fitness) {
    if (genotypes.empty() || genotypes.size() != fitness.size())
        throw std::invalid_argument("apply_elitism: population / fitness size mismatch");
    detail::apply_elitism_inplace(genotypes, fitness, prev_best_genotype, prev_best_fitness);
}

// The classical loop: ranked selection, single-point crossover, independent
// per-allele mutation, optional elitism.
inline RunResult run_classical_ga(const ProblemSpec& problem, const GaParams& params,
                                  const RunOptions& options = {}) {
    params.validate();
    Rng rng(derive_seed(params.seed, 0));
    detail::EvaluatedPopulation pop;
    pop.genotypes = options.initial_population
                        ? *options.initial_population
                        : detail::random_population(params.population, problem.genotype_length, rng);
    if (static_cast<int>(pop.genotypes.size()) != params.population)
        throw std::invalid_argument("run_classical_ga: initial population size mismatch");

    detail::GenerationLoop loop(problem, params, options.stop_on_solution);
    const std::vector<double> probs = selection_probabilities(params.population, params.alpha);
    while (!loop.evaluate(pop)) {
        const auto pairs = select_pairs(probs, rng);
        std::vector<SpinConfig> next;
        next.reserve(params.population);
        for (const auto& [rank_a, rank_b] : pairs) {
            auto [child_a, child_b] =
                crossover(pop.genotypes[pop.ranking[rank_a]], pop.genotypes[pop.ranking[rank_b]], rng);
            next.push_back(mutate(child_a, params.mutation_rate, rng));
            next.push_back(mutate(child_b, params.mutation_rate, rng));
        }
        pop.genotypes = std::move(next);
    }
    return loop.result;
}

// The GQAA loop: ranked parents define nepotism-weighted bias rows, breeding
// splices those rows, and a reverse anneal of the population Ising model
// (fixed polyandric topology, fresh biases) reads out the next generation's
// quantum-genotypes.
inline RunResult run_gqaa(const ProblemSpec& problem, const GaParams& params,
                          const PolyandryConfig& polyandry, const BackendParams& backend,
                          const AnnealSchedule& schedule, const GqaaOptions& options = {}) {
    params.validate();
    backend.validate();
    schedule.validate();
    if (schedule.mode != AnnealMode::reverse)
        throw std::invalid_argument("run_gqaa: the generation loop requires a reverse schedule");
    if (options.read_pool < 1) throw std::invalid_argument("run_gqaa: read_pool must be >= 1");

    const int population = params.population;
    const int n_alleles = problem.genotype_length;
    const ColumnGraph column = build_column_graph(population, polyandry);  // fixed for the whole run
    const double nepotism_alpha = options.nepotism_alpha > 0.0 ? options.nepotism_alpha : params.alpha;
    const std::vector<double> weights = nepotism_weights(population, nepotism_alpha, params.alpha_p);
    const std::vector<double> probs = selection_probabilities(population, params.alpha);

    Rng rng(derive_seed(params.seed, 0));
    detail::EvaluatedPopulation pop;
    pop.genotypes = options.initial_population
                        ? *options.initial_population
                        : detail::random_population(population, n_alleles, rng);
    if (static_cast<int>(pop.genotypes.size()) != population)
        throw std::invalid_argument("run_gqaa: initial population size mismatch");
    // reads of the current generation; pool[0] carries the fitness-bearing read
    std::vector<std::vector<SpinConfig>> pool(1, pop.genotypes);

    detail::GenerationLoop loop(problem, params, options.stop_on_solution);
    while (!loop.evaluate(pop)) {
        // elitism may have overwritten a member; pin its pooled reads too
        for (int i = 0; i < population; ++i)
            if (pool[0][i] != pop.genotypes[i])
                for (auto& read : pool) read[i] = pop.genotypes[i];

        const auto pairs = select_pairs(probs, rng);

        // bias rows of the breeding parents; a parent that breeds repeatedly
        // draws successive reads from the pool
        std::vector<int> uses(population, 0);
        auto parent_row = [&](int rank) {
            const int member = pop.ranking[rank];
            const SpinConfig& sigma = pool[uses[member]++ % pool.size()][member];
            std::vector<double> h(sigma.size());
            for (std::size_t a = 0; a < sigma.size(); ++a)
                h[a] = -static_cast<double>(sigma[a]) * weights[rank];
            return h;
        };

        // children fill the annealer rows in breeding order, pair by pair
        std::vector<std::vector<double>> h_matrix;
        h_matrix.reserve(population);
        for (const auto& [rank_a, rank_b] : pairs) {
            auto [child_a, child_b] = crossover(parent_row(rank_a), parent_row(rank_b), rng);
            h_matrix.push_back(std::move(child_a));
            h_matrix.push_back(std::move(child_b));
        }

        // reverse anneal from the classical-genotypes of the new rows
        SpinConfig init;
        init.reserve(population * n_alleles);
        for (const auto& row : h_matrix) {
            const SpinConfig row_init = classical_genotype(row, rng);
            init.insert(init.end(), row_init.begin(), row_init.end());
        }
        const IsingProblem population_problem = expand_to_population(column, n_alleles, h_matrix);
        BackendParams generation_backend = backend;
        generation_backend.seed = derive_seed(params.seed, static_cast<std::uint64_t>(loop.result.generations_used));
        const std::vector<SpinConfig> reads =
            sample(population_problem, init, schedule, options.read_pool, generation_backend);

        pool.assign(reads.size(), std::vector<SpinConfig>(population));
        for (std::size_t r = 0; r < reads.size(); ++r)
            for (int i = 0; i < population; ++i)
                pool[r][i] = SpinConfig(reads[r].begin() + i * n_alleles,
                                        reads[r].begin() + (i + 1) * n_alleles);
        pop.genotypes = pool[0];
    }
    return loop.result;
}

}  // namespace gqaa
