#pragma once

// Batch experiment execution: JSON experiment configs, independent seeded
// trials on a small worker pool, call-count statistics, and deterministic
// CSV / JSON emission.
//
// Seed splitting rule: trial i of an experiment with master seed S runs
// with derive_seed(S, i). Auxiliary streams (topology build, the two sides
// of a trace) use fixed high stream indices so nothing ever shares a
// stream. Identical config implies byte-identical output.

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gqaa/backends.hpp"
#include "gqaa/ga.hpp"
#include "gqaa/ising_io.hpp"
#include "gqaa/problems.hpp"
#include "gqaa/rng.hpp"
#include "gqaa/schedule.hpp"
#include "gqaa/topology.hpp"

namespace gqaa {

struct ProblemConfig {
    std::string type = "function";  // "function" | "taxicab"
    double kappa = 1.0;
    double threshold = 6.13503;
    int power = 3;
    int n_terms_a = 6;
    int n_terms_b = 6;
    double penalty_weight = 1e6;
};

inline ProblemSpec make_problem(const ProblemConfig& cfg) {
    if (cfg.type == "function") return function_problem(cfg.kappa, cfg.threshold);
    if (cfg.type == "taxicab") {
        TaxicabSpec spec;
        spec.power = cfg.power;
        spec.n_terms_a = cfg.n_terms_a;
        spec.n_terms_b = cfg.n_terms_b;
        return taxicab_problem(spec, cfg.penalty_weight);
    }
    throw std::invalid_argument("config.problem.type: unknown problem type '" + cfg.type + "'");
}

struct ScheduleConfig {
    double s_q = 0.74;
    double ramp_us = 10.0;
    double hold_us = 100.0;
};

struct ExperimentConfig {
    ProblemConfig problem;
    std::string algorithm = "ga";  // "ga" | "gqaa"
    GaParams ga;
    PolyandryConfig polyandry;
    bool polyandry_seed_set = false;
    BackendParams backend;
    double calibrate_target_rate = 0.0;  // > 0: derive backend t0 from this
    ScheduleConfig schedule;
    int read_pool = 1;
    int trials = 1;
    long long call_cap = 7000;
    std::uint64_t seed = 1;
    int workers = 1;

    void validate() const {
        ga.validate();
        if (algorithm != "ga" && algorithm != "gqaa")
            throw std::invalid_argument("config.algorithm: must be 'ga' or 'gqaa'");
        if (trials < 1) throw std::invalid_argument("config.trials: must be >= 1");
        if (call_cap < ga.population)
            throw std::invalid_argument("config.call_cap: must be at least one population of calls");
        if (workers < 1) throw std::invalid_argument("config.workers: must be >= 1");
        if (read_pool < 1) throw std::invalid_argument("config.read_pool: must be >= 1");
        if (schedule.s_q < 0.0 || schedule.s_q > 1.0)
            throw std::invalid_argument("config.schedule.s_q: must lie in [0,1]");
        if (algorithm == "gqaa" && polyandry.topology != Topology::none) polyandry.validate();
    }
};

// Resolved pieces shared by every trial of an experiment.
struct ExperimentPlan {
    ProblemSpec problem;
    AnnealSchedule schedule;
    BackendParams backend;
    PolyandryConfig polyandry;
    int max_generations = 0;  // capped by call_cap
};

inline ExperimentPlan make_plan(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentPlan plan;
    plan.problem = make_problem(cfg.problem);
    plan.schedule = reverse_dip_schedule(cfg.schedule.s_q, cfg.schedule.ramp_us, cfg.schedule.hold_us);
    plan.backend = cfg.backend;
    if (cfg.calibrate_target_rate > 0.0) {
        if (cfg.schedule.s_q >= 1.0)
            throw std::invalid_argument("config.backend: cannot calibrate t0 with s_q = 1");
        const double h_mod = cfg.ga.alpha * cfg.ga.alpha_p;  // the fittest individual's bias
        plan.backend.t0 = calibrate_mutation(cfg.calibrate_target_rate, h_mod) / (1.0 - cfg.schedule.s_q);
    }
    plan.polyandry = cfg.polyandry;
    if (!cfg.polyandry_seed_set)
        plan.polyandry.seed = derive_seed(cfg.seed, 900001);  // topology fixed per experiment
    plan.max_generations =
        std::min<long long>(cfg.ga.max_generations, cfg.call_cap / cfg.ga.population);
    return plan;
}

struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    bool solved = false;
    long long call_count = 0;
    int generations = 0;
    double best_fitness = 0.0;
};

struct TrialStats {
    std::vector<TrialRow> rows;
    int trials = 0;
    long long call_cap = 0;
    double mean = 0.0;         // capped trials contribute call_cap
    double rmsd = 0.0;
    double mean_solved = 0.0;  // solved trials only
    double rmsd_solved = 0.0;
    double failure_rate = 0.0;
};

inline void compute_aggregates(TrialStats& stats) {
    stats.trials = static_cast<int>(stats.rows.size());
    double sum = 0.0, sum_solved = 0.0;
    int n_solved = 0;
    for (const auto& row : stats.rows) {
        sum += static_cast<double>(row.call_count);
        if (row.solved) {
            sum_solved += static_cast<double>(row.call_count);
            ++n_solved;
        }
    }
    stats.mean = stats.trials ? sum / stats.trials : 0.0;
    stats.mean_solved = n_solved ? sum_solved / n_solved : std::nan("");
    double sq = 0.0, sq_solved = 0.0;
    for (const auto& row : stats.rows) {
        const double d = static_cast<double>(row.call_count) - stats.mean;
        sq += d * d;
        if (row.solved) {
            const double ds = static_cast<double>(row.call_count) - stats.mean_solved;
            sq_solved += ds * ds;
        }
    }
    stats.rmsd = stats.trials ? std::sqrt(sq / stats.trials) : 0.0;
    stats.rmsd_solved = n_solved ? std::sqrt(sq_solved / n_solved) : std::nan("");
    stats.failure_rate = stats.trials ? static_cast<double>(stats.trials - n_solved) / stats.trials : 0.0;
}

inline RunResult run_trial(const ExperimentConfig& cfg, const ExperimentPlan& plan,
                           std::uint64_t trial_seed, const RunOptions& base_options = {}) {
    GaParams params = cfg.ga;
    params.seed = trial_seed;
    params.max_generations = std::min(plan.max_generations, cfg.ga.max_generations);
    if (cfg.algorithm == "ga") {
        RunOptions options = base_options;
        return run_classical_ga(plan.problem, params, options);
    }
    GqaaOptions options;
    static_cast<RunOptions&>(options) = base_options;
    options.read_pool = cfg.read_pool;
    return run_gqaa(plan.problem, params, plan.polyandry, plan.backend, plan.schedule, options);
}

// Runs cfg.trials independent trials on a pool of cfg.workers threads.
// Rows are ordered by trial index, so scheduling cannot affect the output.
inline TrialStats run_experiment(const ExperimentConfig& cfg, bool progress = false) {
    const ExperimentPlan plan = make_plan(cfg);
    TrialStats stats;
    stats.call_cap = cfg.call_cap;
    stats.rows.resize(cfg.trials);

    std::atomic<int> next{0};
    std::atomic<int> done{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1)) {
            const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
            const RunResult res = run_trial(cfg, plan, trial_seed);
            TrialRow row;
            row.trial = i;
            row.seed = trial_seed;
            row.solved = res.solved;
            row.call_count = res.solved ? res.call_count : cfg.call_cap;
            row.generations = res.generations_used;
            row.best_fitness = res.best_fitness_per_generation.empty()
                                   ? std::nan("")
                                   : res.best_fitness_per_generation.back();
            stats.rows[i] = row;
            const int finished = done.fetch_add(1) + 1;
            if (progress && (finished % 25 == 0 || finished == cfg.trials))
                std::fprintf(stderr, "  %s: %d/%d trials done\n", cfg.algorithm.c_str(), finished, cfg.trials);
        }
    };
    const int n_workers = std::min(cfg.workers, cfg.trials);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    compute_aggregates(stats);
    return stats;
}

// ---------------------------------------------------------------------------
// deterministic emission
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trials_csv(const TrialStats& stats) {
    std::string out = "trial,seed,solved,call_count,generations,best_fitness\n";
    char buf[160];
    for (const auto& row : stats.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%" PRIu64 ",%d,%lld,%d,%s\n", row.trial, row.seed,
                      row.solved ? 1 : 0, row.call_count, row.generations,
                      format_double(row.best_fitness).c_str());
        out += buf;
    }
    return out;
}

inline std::string summary_csv(const TrialStats& stats) {
    std::string out = "metric,value\n";
    out += "mean," + format_double(stats.mean) + "\n";
    out += "rmsd," + format_double(stats.rmsd) + "\n";
    out += "mean_solved," + format_double(stats.mean_solved) + "\n";
    out += "rmsd_solved," + format_double(stats.rmsd_solved) + "\n";
    out += "failure_rate," + format_double(stats.failure_rate) + "\n";
    out += "trials," + std::to_string(stats.trials) + "\n";
    out += "call_cap," + std::to_string(stats.call_cap) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

inline nlohmann::ordered_json stats_to_json(const TrialStats& stats) {
    nlohmann::ordered_json doc;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : stats.rows) {
        nlohmann::ordered_json r;
        r["trial"] = row.trial;
        r["seed"] = row.seed;
        r["solved"] = row.solved;
        r["call_count"] = row.call_count;
        r["generations"] = row.generations;
        r["best_fitness"] = row.best_fitness;
        rows.push_back(std::move(r));
    }
    doc["trials"] = std::move(rows);
    nlohmann::ordered_json agg;
    agg["mean"] = stats.mean;
    agg["rmsd"] = stats.rmsd;
    agg["mean_solved"] = stats.mean_solved;
    agg["rmsd_solved"] = stats.rmsd_solved;
    agg["failure_rate"] = stats.failure_rate;
    agg["trials"] = stats.trials;
    agg["call_cap"] = stats.call_cap;
    doc["aggregate"] = std::move(agg);
    return doc;
}

inline TrialStats stats_from_json(const nlohmann::json& doc) {
    TrialStats stats;
    for (const auto& r : doc.at("trials")) {
        TrialRow row;
        row.trial = r.at("trial").get<int>();
        row.seed = r.at("seed").get<std::uint64_t>();
        row.solved = r.at("solved").get<bool>();
        row.call_count = r.at("call_count").get<long long>();
        row.generations = r.at("generations").get<int>();
        row.best_fitness = r.at("best_fitness").is_null() ? std::nan("")
                                                          : r.at("best_fitness").get<double>();
        stats.rows.push_back(row);
    }
    stats.call_cap = doc.at("aggregate").at("call_cap").get<long long>();
    compute_aggregates(stats);
    return stats;
}

enum class ResultFormat { csv, structured_text };

inline void emit_results(const TrialStats& stats, ResultFormat format, const std::string& path) {
    if (format == ResultFormat::csv)
        write_text_file(path, summary_csv(stats));
    else
        write_text_file(path, stats_to_json(stats).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// sweeps and traces
// ---------------------------------------------------------------------------

struct SweepPoint {
    double rate = 0.0;
    TrialStats stats;
};

// Classical-GA mutation-rate sweep: one full experiment per rate.
inline std::vector<SweepPoint> mutation_rate_sweep(const ExperimentConfig& cfg,
                                                   const std::vector<double>& rates,
                                                   bool progress = false) {
    if (cfg.algorithm != "ga")
        throw std::invalid_argument("mutation_rate_sweep: config.algorithm must be 'ga'");
    if (rates.empty()) throw std::invalid_argument("mutation_rate_sweep: empty rate list");
    std::vector<SweepPoint> out;
    for (double rate : rates) {
        ExperimentConfig point = cfg;
        point.ga.mutation_rate = rate;
        if (progress) std::fprintf(stderr, "sweep: rate %s\n", format_double(rate).c_str());
        out.push_back({rate, run_experiment(point, progress)});
    }
    return out;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "rate,mean,rmsd,failure_rate\n";
    for (const auto& p : points)
        out += format_double(p.rate) + "," + format_double(p.stats.mean) + "," +
               format_double(p.stats.rmsd) + "," + format_double(p.stats.failure_rate) + "\n";
    return out;
}

struct TraceResult {
    // index g = best fitness after g breeding rounds (0 = initial population),
    // averaged over trials
    std::vector<double> ga_mean_best;
    std::vector<double> gqaa_mean_best;
};

// Runs both algorithms for a fixed number of generations (no early stop)
// and averages the best-fitness trajectory over cfg.trials trials each.
inline TraceResult fitness_trace_experiment(const ExperimentConfig& cfg, int generations,
                                            bool progress = false) {
    if (generations < 0) throw std::invalid_argument("fitness_trace_experiment: generations must be >= 0");
    TraceResult result;
    result.ga_mean_best.assign(generations + 1, 0.0);
    result.gqaa_mean_best.assign(generations + 1, 0.0);

    for (const std::string algorithm : {"ga", "gqaa"}) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.algorithm = algorithm;
        run_cfg.ga.max_generations = generations + 1;
        run_cfg.call_cap = static_cast<long long>(generations + 1) * cfg.ga.population;
        const ExperimentPlan plan = make_plan(run_cfg);
        const std::uint64_t base =
            derive_seed(cfg.seed, algorithm == "ga" ? 910001 : 910002);
        auto& mean = algorithm == "ga" ? result.ga_mean_best : result.gqaa_mean_best;

        std::vector<std::vector<double>> traces(cfg.trials);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1)) {
                RunOptions options;
                options.stop_on_solution = false;
                const RunResult res = run_trial(run_cfg, plan, derive_seed(base, i), options);
                traces[i] = res.best_fitness_per_generation;
                if (progress)
                    std::fprintf(stderr, "  trace %s: trial %d/%d done\n", algorithm.c_str(), i + 1, cfg.trials);
            }
        };
        const int n_workers = std::min(cfg.workers, cfg.trials);
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
            for (auto& t : threads) t.join();
        }
        for (int g = 0; g <= generations; ++g) {
            double sum = 0.0;
            for (const auto& trace : traces) sum += trace[g];
            mean[g] = sum / cfg.trials;
        }
    }
    return result;
}

inline std::string trace_csv(const TraceResult& trace) {
    std::string out = "generation,ga_best_mean,gqaa_best_mean\n";
    for (std::size_t g = 0; g < trace.ga_mean_best.size(); ++g)
        out += std::to_string(g) + "," + format_double(trace.ga_mean_best[g]) + "," +
               format_double(trace.gqaa_mean_best[g]) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

namespace detail {

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const std::exception&) {
        throw std::invalid_argument(path + "." + key + ": invalid value");
    }
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
    using detail::get_or;
    ExperimentConfig cfg;
    if (doc.contains("problem")) {
        const auto& p = doc.at("problem");
        cfg.problem.type = get_or<std::string>(p, "type", cfg.problem.type, "config.problem");
        cfg.problem.kappa = get_or(p, "kappa", cfg.problem.kappa, "config.problem");
        if (cfg.problem.type == "function" && !p.contains("threshold"))
            throw std::invalid_argument("config.problem.threshold: required for function problems");
        cfg.problem.threshold = get_or(p, "threshold", cfg.problem.threshold, "config.problem");
        cfg.problem.power = get_or(p, "power", cfg.problem.power, "config.problem");
        cfg.problem.n_terms_a = get_or(p, "n", cfg.problem.n_terms_a, "config.problem");
        cfg.problem.n_terms_b = get_or(p, "m", cfg.problem.n_terms_b, "config.problem");
        cfg.problem.penalty_weight = get_or(p, "penalty_weight", cfg.problem.penalty_weight, "config.problem");
    }
    cfg.algorithm = get_or<std::string>(doc, "algorithm", cfg.algorithm, "config");
    if (doc.contains("ga")) {
        const auto& g = doc.at("ga");
        cfg.ga.population = get_or(g, "population", cfg.ga.population, "config.ga");
        cfg.ga.alpha = get_or(g, "alpha", cfg.ga.alpha, "config.ga");
        cfg.ga.alpha_p = get_or(g, "alpha_p", cfg.ga.alpha_p, "config.ga");
        cfg.ga.mutation_rate = get_or(g, "mutation_rate", cfg.ga.mutation_rate, "config.ga");
        cfg.ga.elitism = get_or(g, "elitism", cfg.ga.elitism, "config.ga");
        cfg.ga.elite_count = get_or(g, "elite_count", cfg.ga.elite_count, "config.ga");
        cfg.ga.max_generations = get_or(g, "max_generations", cfg.ga.max_generations, "config.ga");
    }
    if (doc.contains("polyandry")) {
        const auto& p = doc.at("polyandry");
        const std::string topo = get_or<std::string>(p, "topology", "islands", "config.polyandry");
        if (topo == "none")
            cfg.polyandry.topology = Topology::none;
        else if (topo == "nearest-neighbor")
            cfg.polyandry.topology = Topology::nearest_neighbor;
        else if (topo == "islands")
            cfg.polyandry.topology = Topology::islands;
        else
            throw std::invalid_argument("config.polyandry.topology: unknown topology '" + topo + "'");
        cfg.polyandry.base_j = get_or(p, "base_j", cfg.polyandry.base_j, "config.polyandry");
        cfg.polyandry.rho = get_or(p, "rho", cfg.polyandry.rho, "config.polyandry");
        cfg.polyandry.rho_prime = get_or(p, "rho_prime", cfg.polyandry.rho_prime, "config.polyandry");
        cfg.polyandry.kappa = get_or(p, "kappa", cfg.polyandry.kappa, "config.polyandry");
        cfg.polyandry.island_size = get_or(p, "island_size", cfg.polyandry.island_size, "config.polyandry");
        if (p.contains("seed")) {
            cfg.polyandry.seed = p.at("seed").get<std::uint64_t>();
            cfg.polyandry_seed_set = true;
        }
    }
    if (doc.contains("backend")) {
        const auto& b = doc.at("backend");
        const std::string variant =
            get_or<std::string>(b, "variant", "thermal-surrogate", "config.backend");
        if (variant == "classical-limit")
            cfg.backend.variant = BackendVariant::classical_limit;
        else if (variant == "thermal-surrogate")
            cfg.backend.variant = BackendVariant::thermal_surrogate;
        else if (variant == "quantum-exact")
            cfg.backend.variant = BackendVariant::quantum_exact;
        else
            throw std::invalid_argument("config.backend.variant: unknown variant '" + variant + "'");
        cfg.backend.flip_rate = get_or(b, "flip_rate", cfg.backend.flip_rate, "config.backend");
        cfg.backend.t0 = get_or(b, "t0", cfg.backend.t0, "config.backend");
        cfg.backend.sweeps_per_us = get_or(b, "sweeps_per_us", cfg.backend.sweeps_per_us, "config.backend");
        cfg.backend.step_us = get_or(b, "step_us", cfg.backend.step_us, "config.backend");
        cfg.calibrate_target_rate =
            get_or(b, "calibrate_target_rate", cfg.calibrate_target_rate, "config.backend");
    }
    if (doc.contains("schedule")) {
        const auto& s = doc.at("schedule");
        cfg.schedule.s_q = get_or(s, "s_q", cfg.schedule.s_q, "config.schedule");
        cfg.schedule.ramp_us = get_or(s, "ramp_us", cfg.schedule.ramp_us, "config.schedule");
        cfg.schedule.hold_us = get_or(s, "hold_us", cfg.schedule.hold_us, "config.schedule");
    }
    cfg.read_pool = get_or(doc, "read_pool", cfg.read_pool, "config");
    cfg.trials = get_or(doc, "trials", cfg.trials, "config");
    cfg.call_cap = get_or(doc, "call_cap", cfg.call_cap, "config");
    cfg.seed = get_or(doc, "seed", cfg.seed, "config");
    cfg.workers = get_or(doc, "workers", cfg.workers, "config");
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("config " + path + ": " + e.what());
    }
    return parse_experiment_config(doc);
}

// The anneal request the configured GQAA would submit for its initial
// ranked population: nepotism-weighted bias rows over the fixed polyandric
// topology, initialized at the corresponding classical-genotypes.
inline IsingDocument make_export_document(const ExperimentConfig& cfg) {
    const ExperimentPlan plan = make_plan(cfg);
    const int population = cfg.ga.population;
    Rng rng(derive_seed(cfg.seed, 0));
    std::vector<SpinConfig> genotypes =
        detail::random_population(population, plan.problem.genotype_length, rng);
    std::vector<double> fitness(population);
    for (int i = 0; i < population; ++i) fitness[i] = evaluate(plan.problem, genotypes[i]);
    const std::vector<int> ranking = detail::rank_population(fitness);
    const std::vector<double> weights = nepotism_weights(population, cfg.ga.alpha, cfg.ga.alpha_p);
    const auto h_matrix = build_parent_genotypes(genotypes, ranking, weights);

    const ColumnGraph column = build_column_graph(population, plan.polyandry);
    IsingDocument doc;
    doc.problem = expand_to_population(column, plan.problem.genotype_length, h_matrix);
    doc.init.reserve(population * plan.problem.genotype_length);
    for (const auto& row : h_matrix) {
        const SpinConfig row_init = classical_genotype(row, rng);
        doc.init.insert(doc.init.end(), row_init.begin(), row_init.end());
    }
    doc.schedule = plan.schedule;
    return doc;
}

}  // namespace gqaa
