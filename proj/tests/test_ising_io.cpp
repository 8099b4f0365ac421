#include <doctest.h>

#include <cstdio>
#include <set>
#include <string>

#include "gqaa/ga.hpp"
#include "gqaa/ising_io.hpp"
#include "gqaa/topology.hpp"

using namespace gqaa;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/gqaa_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ising export: empty problem produces a valid document") {
    TempFile file("empty.json");
    AnnealSchedule sched = reverse_dip_schedule(0.74);
    export_ising(IsingProblem(), {}, sched, file.path);
    const IsingDocument doc = import_ising(file.path);
    CHECK(doc.problem.n_spins == 0);
    CHECK(doc.problem.j.empty());
    CHECK(doc.init.empty());
    CHECK(doc.schedule.vertices == sched.vertices);
}

TEST_CASE("ising export: round-trips bit exactly") {
    IsingProblem p(2);
    p.h = {0.1 / 3.0, -0.7 / 11.0};  // not exactly representable in decimal
    p.set_coupling(0, 1, 0.07 * (1.0 / 3.0));
    const SpinConfig init = {1, -1};
    const AnnealSchedule sched = reverse_dip_schedule(0.74);

    TempFile file("roundtrip.json");
    export_ising(p, init, sched, file.path);
    const IsingDocument doc = import_ising(file.path);
    CHECK(doc.problem.n_spins == p.n_spins);
    CHECK(doc.problem.h == p.h);  // bitwise equality
    CHECK(doc.problem.j == p.j);
    CHECK(doc.init == init);
    CHECK(doc.schedule.vertices == sched.vertices);
    CHECK(doc.schedule.mode == sched.mode);

    // a second export of the import is byte-identical
    TempFile file2("roundtrip2.json");
    export_ising(doc.problem, doc.init, doc.schedule, file2.path);
    CHECK(ising_to_json(p, init, sched).dump() == ising_to_json(doc.problem, doc.init, doc.schedule).dump());
}

TEST_CASE("ising export: records autoscale false and import enforces it") {
    auto doc = ising_to_json(IsingProblem(2), {1, 1}, reverse_dip_schedule(0.74));
    CHECK(doc.at("autoscale").get<bool>() == false);
    doc["autoscale"] = true;
    CHECK_THROWS_AS(ising_from_json(doc), std::runtime_error);
    doc["autoscale"] = false;
    doc["format_version"] = 2;
    CHECK_THROWS_AS(ising_from_json(doc), std::runtime_error);
}

TEST_CASE("ising export: population problems only carry the configured coupling magnitudes") {
    // Diophantine-side configuration: base 0.07, enhanced -0.15
    PolyandryConfig cfg;
    cfg.base_j = 0.07;
    cfg.rho = 0.5;
    cfg.rho_prime = 0.064;
    cfg.kappa = -0.15;
    cfg.seed = 12;
    const ColumnGraph column = build_islands(30, cfg);
    std::vector<std::vector<double>> h(30, std::vector<double>(4, 0.01));
    const IsingProblem expanded = expand_to_population(column, 4, h);
    std::set<double> magnitudes;
    for (const auto& [pair, v] : expanded.j) magnitudes.insert(std::abs(v));
    for (double m : magnitudes) CHECK((m == 0.07 || m == 0.15));

    // function-optimization side: base 0.08
    PolyandryConfig fn_cfg = cfg;
    fn_cfg.base_j = 0.08;
    fn_cfg.rho_prime = 0.06;
    const ColumnGraph fn_column = build_islands(30, fn_cfg);
    const IsingProblem fn_expanded = expand_to_population(fn_column, 4, h);
    magnitudes.clear();
    for (const auto& [pair, v] : fn_expanded.j) magnitudes.insert(std::abs(v));
    for (double m : magnitudes) CHECK((m == 0.08 || m == 0.15));
}

TEST_CASE("ising export: surfaces unwritable paths") {
    CHECK_THROWS_AS(export_ising(IsingProblem(), {}, reverse_dip_schedule(0.74), "/nonexistent_dir/x.json"),
                    std::runtime_error);
}
