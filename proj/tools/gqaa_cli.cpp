// Command-line front end for the GQAA experiment harness.
//
//   gqaa run --config FILE [--trials N] [--seed S] [--workers W] [--out DIR]
//   gqaa sweep --config FILE --rates a,b,c [--out DIR]
//   gqaa trace --config FILE --generations G [--out DIR]
//   gqaa export-ising --config FILE --out FILE
//   gqaa verify --file SOLUTIONS
//
// Machine-readable results go to standard output, progress to standard
// error. GQAA_SEED and GQAA_WORKERS environment variables override the
// config (command-line flags in turn override the environment).

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gqaa/experiment.hpp"
#include "gqaa/ising_io.hpp"
#include "gqaa/problems.hpp"

namespace {

std::optional<std::string> env_value(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

void apply_env_overrides(gqaa::ExperimentConfig& cfg) {
    if (auto seed = env_value("GQAA_SEED")) cfg.seed = std::stoull(*seed);
    if (auto workers = env_value("GQAA_WORKERS")) cfg.workers = std::stoi(*workers);
}

std::vector<double> parse_rate_list(const std::string& text) {
    std::vector<double> rates;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        rates.push_back(std::stod(item));
    }
    return rates;
}

// Lines look like "1 12 | 9 10" or "1,12|9,10"; blank lines and lines
// starting with '#' are skipped.
bool parse_solution_line(const std::string& line, std::vector<long long>& a, std::vector<long long>& b) {
    const auto bar = line.find('|');
    if (bar == std::string::npos) return false;
    auto parse_side = [](const std::string& text, std::vector<long long>& out) {
        std::string cleaned = text;
        for (auto& c : cleaned)
            if (c == ',' || c == '(' || c == ')') c = ' ';
        std::stringstream ss(cleaned);
        long long v;
        while (ss >> v) out.push_back(v);
        return !out.empty();
    };
    return parse_side(line.substr(0, bar), a) && parse_side(line.substr(bar + 1), b);
}

int cmd_verify(const std::string& path, int power) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "verify: cannot open " << path << "\n";
        return 2;
    }
    std::cout << "line,ok,sum_a,sum_b\n";
    std::string line;
    int line_no = 0, failures = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<long long> a, b;
        if (!parse_solution_line(line, a, b)) {
            std::cout << line_no << ",parse_error,,\n";
            ++failures;
            continue;
        }
        long long sum_a = 0, sum_b = 0;
        for (long long v : a) sum_a += gqaa::int_pow(v, power);
        for (long long v : b) sum_b += gqaa::int_pow(v, power);
        const bool ok = gqaa::verify_taxicab(a, b, power);
        std::cout << line_no << "," << (ok ? 1 : 0) << "," << sum_a << "," << sum_b << "\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genetic quantum annealing optimization harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", out_file, rates_text, solutions_path;
    int generations = 100;
    int verify_power = 3;
    std::optional<int> trials_override, workers_override;
    std::optional<std::uint64_t> seed_override;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run the configured experiment");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--trials", trials_override, "override trial count");
    run->add_option("--seed", seed_override, "override master seed");
    run->add_option("--workers", workers_override, "override worker count");
    run->add_option("--out", out_dir, "output directory for CSV files");
    run->add_flag("--quiet", quiet, "suppress progress output");

    auto* sweep = app.add_subcommand("sweep", "classical-GA mutation rate sweep");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--rates", rates_text, "comma-separated mutation rates")->required();
    sweep->add_option("--out", out_dir, "output directory for CSV files");
    sweep->add_flag("--quiet", quiet, "suppress progress output");

    auto* trace = app.add_subcommand("trace", "averaged best-fitness trace, GA and GQAA side by side");
    trace->add_option("--config", config_path, "experiment config file")->required();
    trace->add_option("--generations", generations, "breeding generations to trace");
    trace->add_option("--out", out_dir, "output directory for CSV files");
    trace->add_flag("--quiet", quiet, "suppress progress output");

    auto* export_ising = app.add_subcommand("export-ising", "write the configured anneal request to a file");
    export_ising->add_option("--config", config_path, "experiment config file")->required();
    export_ising->add_option("--out", out_file, "output file")->required();

    auto* verify = app.add_subcommand("verify", "check a Taxicab solutions file");
    verify->add_option("--file", solutions_path, "solutions file, one 'a... | b...' per line")->required();
    verify->add_option("--power", verify_power, "power of the Diophantine sums");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(solutions_path, verify_power);

        gqaa::ExperimentConfig cfg = gqaa::load_experiment_config(config_path);
        apply_env_overrides(cfg);
        if (trials_override) cfg.trials = *trials_override;
        if (seed_override) cfg.seed = *seed_override;
        if (workers_override) cfg.workers = *workers_override;
        cfg.validate();

        if (run->parsed()) {
            const gqaa::TrialStats stats = gqaa::run_experiment(cfg, !quiet);
            gqaa::write_text_file(out_dir + "/trials.csv", gqaa::trials_csv(stats));
            gqaa::write_text_file(out_dir + "/summary.csv", gqaa::summary_csv(stats));
            std::cout << gqaa::summary_csv(stats);
            std::cerr << "wrote " << out_dir << "/trials.csv and " << out_dir << "/summary.csv\n";
        } else if (sweep->parsed()) {
            const auto points = gqaa::mutation_rate_sweep(cfg, parse_rate_list(rates_text), !quiet);
            const std::string csv = gqaa::sweep_csv(points);
            gqaa::write_text_file(out_dir + "/sweep.csv", csv);
            std::cout << csv;
            std::cerr << "wrote " << out_dir << "/sweep.csv\n";
        } else if (trace->parsed()) {
            const auto result = gqaa::fitness_trace_experiment(cfg, generations, !quiet);
            const std::string csv = gqaa::trace_csv(result);
            gqaa::write_text_file(out_dir + "/trace.csv", csv);
            std::cout << csv;
            std::cerr << "wrote " << out_dir << "/trace.csv\n";
        } else if (export_ising->parsed()) {
            const gqaa::IsingDocument doc = gqaa::make_export_document(cfg);
            gqaa::export_ising(doc.problem, doc.init, doc.schedule, out_file);
            std::cerr << "wrote " << out_file << " (" << doc.problem.n_spins << " spins, "
                      << doc.problem.j.size() << " couplings)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
