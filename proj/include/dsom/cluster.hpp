#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dsom/errors.hpp"

namespace dsom {

/// One physical host. Capacities are abstract CPU / memory units, both > 0.
struct PhysicalMachine {
    int id = 0;
    double cpu_capacity = 0.0;
    double mem_capacity = 0.0;

    bool operator==(const PhysicalMachine&) const = default;
};

/// One microservice container's resource demand.
struct ContainerSpec {
    int id = 0;
    double cpu_demand = 0.0;
    double mem_demand = 0.0;

    bool operator==(const ContainerSpec&) const = default;
};

/// Undirected weighted edge between two containers; a < b always.
struct CommEdge {
    int a = 0;
    int b = 0;
    double weight = 0.0;

    bool operator==(const CommEdge&) const = default;
};

/// Affinity graph over containers: traffic volume between pairs.
/// Edges are kept sorted by (a, b) with a < b, one edge per unordered pair.
struct CommGraph {
    std::vector<CommEdge> edges;

    bool operator==(const CommGraph&) const = default;
};

/// Total assignment container -> machine. The GA chromosome: a flat vector
/// indexed by container id holding machine ids.
struct Placement {
    std::vector<int> assignment;

    bool operator==(const Placement&) const = default;
};

/// One experiment world: hosts, containers and their affinity graph.
/// `demand_range`, when present, records the [lo, hi] integer demand range the
/// generator drew from, so generated scenario files are self-describing.
struct Scenario {
    std::string name;
    std::vector<PhysicalMachine> machines;
    std::vector<ContainerSpec> containers;
    CommGraph comm;
    std::optional<std::array<int, 2>> demand_range;

    int num_machines() const { return static_cast<int>(machines.size()); }
    int num_containers() const { return static_cast<int>(containers.size()); }

    bool operator==(const Scenario&) const = default;
};

/// Load state of one machine under a placement. `load` is the mean of the
/// CPU and memory utilization fractions; an empty machine is inactive with
/// load 0.
struct MachineLoad {
    double load = 0.0;
    bool active = false;
};

/// Checks every structural invariant of a scenario. Throws StructuralError
/// with a description of the first violation found.
inline void validate(const Scenario& scn) {
    if (scn.machines.empty())
        throw StructuralError("scenario '" + scn.name + "' has no machines");
    double max_cpu = 0.0, max_mem = 0.0;
    for (std::size_t i = 0; i < scn.machines.size(); ++i) {
        const auto& m = scn.machines[i];
        if (m.id != static_cast<int>(i))
            throw StructuralError("machine ids must be dense 0-based indices");
        if (m.cpu_capacity <= 0.0 || m.mem_capacity <= 0.0)
            throw StructuralError("machine " + std::to_string(i) + " has non-positive capacity");
        max_cpu = std::max(max_cpu, m.cpu_capacity);
        max_mem = std::max(max_mem, m.mem_capacity);
    }
    for (std::size_t i = 0; i < scn.containers.size(); ++i) {
        const auto& c = scn.containers[i];
        if (c.id != static_cast<int>(i))
            throw StructuralError("container ids must be dense 0-based indices");
        if (c.cpu_demand <= 0.0 || c.mem_demand <= 0.0)
            throw StructuralError("container " + std::to_string(i) + " has non-positive demand");
        if (c.cpu_demand > max_cpu || c.mem_demand > max_mem)
            throw StructuralError("container " + std::to_string(i) + " exceeds every machine capacity");
    }
    const int n = scn.num_containers();
    const CommEdge* prev = nullptr;
    for (const auto& e : scn.comm.edges) {
        if (e.a < 0 || e.b >= n || e.a >= e.b)
            throw StructuralError("comm edge endpoints must satisfy 0 <= a < b < #containers");
        if (e.weight < 0.0)
            throw StructuralError("comm edge weight must be >= 0");
        if (prev && !(prev->a < e.a || (prev->a == e.a && prev->b < e.b)))
            throw StructuralError("comm edges must be sorted and unique per pair");
        prev = &e;
    }
}

/// Throws StructuralError unless `p` is a total placement over the scenario's
/// containers with every machine id in range.
inline void validate_placement(const Scenario& scn, const Placement& p) {
    if (p.assignment.size() != scn.containers.size())
        throw StructuralError("placement covers " + std::to_string(p.assignment.size()) +
                              " containers, scenario has " + std::to_string(scn.containers.size()));
    for (int m : p.assignment) {
        if (m < 0 || m >= scn.num_machines())
            throw StructuralError("placement references unknown machine " + std::to_string(m));
    }
}

/// Per-machine load fractions z_i = (cpu_used/cpu_cap + mem_used/mem_cap) / 2.
/// Machines hosting nothing report z = 0 and are flagged inactive.
inline std::vector<MachineLoad> machine_loads(const Scenario& scn, const Placement& p) {
    validate_placement(scn, p);
    const std::size_t m = scn.machines.size();
    std::vector<double> cpu_used(m, 0.0), mem_used(m, 0.0);
    std::vector<bool> used(m, false);
    for (std::size_t c = 0; c < p.assignment.size(); ++c) {
        const int host = p.assignment[c];
        cpu_used[host] += scn.containers[c].cpu_demand;
        mem_used[host] += scn.containers[c].mem_demand;
        used[host] = true;
    }
    std::vector<MachineLoad> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!used[i]) continue;
        out[i].active = true;
        out[i].load = (cpu_used[i] / scn.machines[i].cpu_capacity +
                       mem_used[i] / scn.machines[i].mem_capacity) / 2.0;
    }
    return out;
}

/// Number of machines hosting at least one container.
inline int active_machine_count(const Scenario& scn, const Placement& p) {
    validate_placement(scn, p);
    std::vector<bool> used(scn.machines.size(), false);
    for (int host : p.assignment) used[host] = true;
    return static_cast<int>(std::count(used.begin(), used.end(), true));
}

/// True iff every machine satisfies both capacity constraints under `p`.
inline bool is_feasible(const Scenario& scn, const Placement& p) {
    validate_placement(scn, p);
    const std::size_t m = scn.machines.size();
    std::vector<double> cpu_used(m, 0.0), mem_used(m, 0.0);
    for (std::size_t c = 0; c < p.assignment.size(); ++c) {
        const int host = p.assignment[c];
        cpu_used[host] += scn.containers[c].cpu_demand;
        mem_used[host] += scn.containers[c].mem_demand;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (cpu_used[i] > scn.machines[i].cpu_capacity) return false;
        if (mem_used[i] > scn.machines[i].mem_capacity) return false;
    }
    return true;
}

/// Mean load over active machines; 0 if nothing is placed.
inline double mean_active_load(const std::vector<MachineLoad>& loads) {
    double sum = 0.0;
    int n = 0;
    for (const auto& l : loads) {
        if (l.active) { sum += l.load; ++n; }
    }
    return n == 0 ? 0.0 : sum / n;
}

/// Maximum load over active machines; 0 if nothing is placed.
inline double max_active_load(const std::vector<MachineLoad>& loads) {
    double best = 0.0;
    for (const auto& l : loads) {
        if (l.active) best = std::max(best, l.load);
    }
    return best;
}

} // namespace dsom
