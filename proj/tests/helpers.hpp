#pragma once

// Shared scenario builders for the test suite.

#include <utility>
#include <vector>

#include "dsom/dsom.hpp"

namespace testutil {

/// Scenario from (cpu, mem) capacity and demand pairs; ids come from list
/// positions.
inline dsom::Scenario make_scenario(const std::vector<std::pair<double, double>>& machines,
                                    const std::vector<std::pair<double, double>>& containers,
                                    std::vector<dsom::CommEdge> edges = {},
                                    const std::string& name = "test") {
    dsom::Scenario scn;
    scn.name = name;
    int id = 0;
    for (const auto& [cpu, mem] : machines) scn.machines.push_back({id++, cpu, mem});
    id = 0;
    for (const auto& [cpu, mem] : containers) scn.containers.push_back({id++, cpu, mem});
    scn.comm.edges = std::move(edges);
    dsom::validate(scn);
    return scn;
}

/// `count` identical machines of capacity (cap, cap).
inline std::vector<std::pair<double, double>> uniform_machines(int count, double cap = 100.0) {
    return std::vector<std::pair<double, double>>(count, {cap, cap});
}

/// Feasible placements sampled via the population initializer.
inline std::vector<dsom::Placement> random_feasible_placements(const dsom::Scenario& scn,
                                                               int count, std::uint64_t seed) {
    dsom::GAParams params;
    params.population_size = count < 2 ? 2 : count;
    params.seed = seed;
    auto pop = dsom::initialize_population(scn, params);
    pop.resize(count);
    return pop;
}

/// Relabels machines by `perm`: new machine j is old machine perm[j], and the
/// placement is remapped to match. Used for permutation-invariance checks.
inline std::pair<dsom::Scenario, dsom::Placement> relabel_machines(const dsom::Scenario& scn,
                                                                   const dsom::Placement& p,
                                                                   const std::vector<int>& perm) {
    dsom::Scenario out = scn;
    std::vector<int> old_to_new(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
        out.machines[j] = scn.machines[perm[j]];
        out.machines[j].id = static_cast<int>(j);
        old_to_new[perm[j]] = static_cast<int>(j);
    }
    dsom::Placement q = p;
    for (auto& m : q.assignment) m = old_to_new[m];
    return {std::move(out), std::move(q)};
}

/// Scenario minus one container (ids renumbered), with the placement
/// restricted accordingly.
inline std::pair<dsom::Scenario, dsom::Placement> remove_container(const dsom::Scenario& scn,
                                                                   const dsom::Placement& p,
                                                                   int victim) {
    dsom::Scenario out = scn;
    out.containers.erase(out.containers.begin() + victim);
    for (std::size_t i = 0; i < out.containers.size(); ++i)
        out.containers[i].id = static_cast<int>(i);
    std::vector<dsom::CommEdge> edges;
    for (auto e : scn.comm.edges) {
        if (e.a == victim || e.b == victim) continue;
        if (e.a > victim) --e.a;
        if (e.b > victim) --e.b;
        edges.push_back(e);
    }
    out.comm.edges = std::move(edges);
    dsom::Placement q = p;
    q.assignment.erase(q.assignment.begin() + victim);
    return {std::move(out), std::move(q)};
}

} // namespace testutil
