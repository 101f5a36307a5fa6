#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"

namespace dsom {

// Scenario file schema (JSON object):
//   name       string
//   machines   [{"cpu": number, "mem": number}, ...]   ids are list positions
//   containers [{"cpu": number, "mem": number}, ...]   ids are list positions
//   edges      [[a, b, weight], ...]                   a < b, container ids
//   demand_range  [lo, hi]                             optional, generator metadata
// Parse -> serialize -> parse is the identity on the value.

inline nlohmann::json scenario_to_json(const Scenario& scn) {
    nlohmann::json j;
    j["name"] = scn.name;
    j["machines"] = nlohmann::json::array();
    for (const auto& m : scn.machines)
        j["machines"].push_back({{"cpu", m.cpu_capacity}, {"mem", m.mem_capacity}});
    j["containers"] = nlohmann::json::array();
    for (const auto& c : scn.containers)
        j["containers"].push_back({{"cpu", c.cpu_demand}, {"mem", c.mem_demand}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : scn.comm.edges)
        j["edges"].push_back({e.a, e.b, e.weight});
    if (scn.demand_range)
        j["demand_range"] = {(*scn.demand_range)[0], (*scn.demand_range)[1]};
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario scn;
    try {
        scn.name = j.at("name").get<std::string>();
        int id = 0;
        for (const auto& m : j.at("machines"))
            scn.machines.push_back({id++, m.at("cpu").get<double>(), m.at("mem").get<double>()});
        id = 0;
        for (const auto& c : j.at("containers"))
            scn.containers.push_back({id++, c.at("cpu").get<double>(), c.at("mem").get<double>()});
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw StructuralError("edge entries must be [a, b, weight]");
            scn.comm.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
        }
        if (j.contains("demand_range")) {
            const auto& r = j.at("demand_range");
            scn.demand_range = std::array<int, 2>{r.at(0).get<int>(), r.at(1).get<int>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("bad scenario document: ") + e.what());
    }
    validate(scn);
    return scn;
}

inline std::string serialize_scenario(const Scenario& scn) {
    return scenario_to_json(scn).dump(2) + "\n";
}

inline Scenario parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("scenario is not valid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const Scenario& scn, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw StructuralError("cannot open '" + path + "' for writing");
    out << serialize_scenario(scn);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw StructuralError("cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace dsom
