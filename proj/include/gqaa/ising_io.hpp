#pragma once

// Self-describing export of an anneal request: problem couplings, initial
// state, schedule, and mode, with autoscale pinned to false so downstream
// hardware runs never rescale the couplings. JSON with round-trip-exact
// number formatting.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gqaa/ising.hpp"
#include "gqaa/schedule.hpp"

namespace gqaa {

struct IsingDocument {
    IsingProblem problem;
    SpinConfig init;
    AnnealSchedule schedule;
};

inline nlohmann::ordered_json ising_to_json(const IsingProblem& problem, const SpinConfig& init,
                                            const AnnealSchedule& schedule) {
    schedule.validate();
    if (!init.empty()) check_spin_config(problem, init, "export_ising");
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["n_spins"] = problem.n_spins;
    doc["h"] = problem.h;
    auto couplings = nlohmann::ordered_json::array();
    for (const auto& [pair, v] : problem.j)
        couplings.push_back({pair.first, pair.second, v});
    doc["J"] = std::move(couplings);
    auto init_json = nlohmann::ordered_json::array();
    for (auto s : init) init_json.push_back(static_cast<int>(s));
    doc["init"] = std::move(init_json);
    auto sched_json = nlohmann::ordered_json::array();
    for (const auto& [t, s] : schedule.vertices) sched_json.push_back({t, s});
    doc["schedule"] = std::move(sched_json);
    doc["mode"] = schedule.mode == AnnealMode::forward ? "forward" : "reverse";
    doc["autoscale"] = false;
    return doc;
}

inline void export_ising(const IsingProblem& problem, const SpinConfig& init,
                         const AnnealSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_ising: cannot open " + path + " for writing");
    out << ising_to_json(problem, init, schedule).dump(2) << '\n';
    if (!out) throw std::runtime_error("export_ising: write to " + path + " failed");
}

inline IsingDocument ising_from_json(const nlohmann::json& doc) {
    if (doc.at("format_version").get<int>() != 1)
        throw std::runtime_error("import_ising: unsupported format_version");
    if (doc.at("autoscale").get<bool>())
        throw std::runtime_error("import_ising: autoscale must be false");
    IsingDocument result;
    result.problem = IsingProblem(doc.at("n_spins").get<int>());
    result.problem.h = doc.at("h").get<std::vector<double>>();
    if (static_cast<int>(result.problem.h.size()) != result.problem.n_spins)
        throw std::runtime_error("import_ising: h length does not match n_spins");
    for (const auto& entry : doc.at("J")) {
        if (entry.size() != 3) throw std::runtime_error("import_ising: J entries must be [i, j, value]");
        result.problem.set_coupling(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>());
    }
    for (const auto& v : doc.at("init")) {
        const int s = v.get<int>();
        if (s != 1 && s != -1) throw std::runtime_error("import_ising: init entries must be +1 or -1");
        result.init.push_back(static_cast<std::int8_t>(s));
    }
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "forward")
        result.schedule.mode = AnnealMode::forward;
    else if (mode == "reverse")
        result.schedule.mode = AnnealMode::reverse;
    else
        throw std::runtime_error("import_ising: mode must be forward or reverse");
    for (const auto& vertex : doc.at("schedule")) {
        if (vertex.size() != 2) throw std::runtime_error("import_ising: schedule entries must be [t_us, s]");
        result.schedule.vertices.emplace_back(vertex[0].get<double>(), vertex[1].get<double>());
    }
    result.schedule.validate();
    if (!result.init.empty()) check_spin_config(result.problem, result.init, "import_ising");
    return result;
}

inline IsingDocument import_ising(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_ising: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return ising_from_json(doc);
}

}  // namespace gqaa
