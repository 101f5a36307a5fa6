#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"

namespace dsom {

namespace detail {

struct CapacityTracker {
    explicit CapacityTracker(const Scenario& scn)
        : scn(&scn), cpu_used(scn.machines.size(), 0.0), mem_used(scn.machines.size(), 0.0) {}

    bool fits(const ContainerSpec& c, int m) const {
        return cpu_used[m] + c.cpu_demand <= scn->machines[m].cpu_capacity &&
               mem_used[m] + c.mem_demand <= scn->machines[m].mem_capacity;
    }

    double load_after(const ContainerSpec& c, int m) const {
        return ((cpu_used[m] + c.cpu_demand) / scn->machines[m].cpu_capacity +
                (mem_used[m] + c.mem_demand) / scn->machines[m].mem_capacity) / 2.0;
    }

    void place(const ContainerSpec& c, int m) {
        cpu_used[m] += c.cpu_demand;
        mem_used[m] += c.mem_demand;
    }

    const Scenario* scn;
    std::vector<double> cpu_used;
    std::vector<double> mem_used;
};

[[noreturn]] inline void no_fit(const Scenario& scn, int container) {
    throw InfeasibleError("container " + std::to_string(container) + " fits no machine in scenario '" +
                          scn.name + "'");
}

} // namespace detail

/// Best-fit consolidation: each container, in input order, goes to the
/// feasible machine whose post-placement load is maximal; ties to the lower
/// machine id.
inline Placement schedule_max_utilization_first(const Scenario& scn) {
    validate(scn);
    detail::CapacityTracker cap(scn);
    Placement p;
    p.assignment.reserve(scn.containers.size());
    for (const auto& c : scn.containers) {
        int best = -1;
        double best_load = -1.0;
        for (int m = 0; m < scn.num_machines(); ++m) {
            if (!cap.fits(c, m)) continue;
            const double load = cap.load_after(c, m);
            if (load > best_load) {
                best = m;
                best_load = load;
            }
        }
        if (best < 0) detail::no_fit(scn, c.id);
        cap.place(c, best);
        p.assignment.push_back(best);
    }
    return p;
}

/// First-fit: each container, in input order, goes to the lowest-id machine
/// with sufficient remaining capacity.
inline Placement schedule_fcfs(const Scenario& scn) {
    validate(scn);
    detail::CapacityTracker cap(scn);
    Placement p;
    p.assignment.reserve(scn.containers.size());
    for (const auto& c : scn.containers) {
        int chosen = -1;
        for (int m = 0; m < scn.num_machines(); ++m) {
            if (cap.fits(c, m)) {
                chosen = m;
                break;
            }
        }
        if (chosen < 0) detail::no_fit(scn, c.id);
        cap.place(c, chosen);
        p.assignment.push_back(chosen);
    }
    return p;
}

/// Round-robin ("polling"): containers are assigned cyclically by machine id,
/// advancing past machines that cannot fit the container, at most one full
/// cycle per container.
inline Placement schedule_round_robin(const Scenario& scn) {
    validate(scn);
    detail::CapacityTracker cap(scn);
    Placement p;
    p.assignment.reserve(scn.containers.size());
    const int m_count = scn.num_machines();
    int cursor = 0;
    for (const auto& c : scn.containers) {
        int chosen = -1;
        for (int probe = 0; probe < m_count; ++probe) {
            const int m = (cursor + probe) % m_count;
            if (cap.fits(c, m)) {
                chosen = m;
                break;
            }
        }
        if (chosen < 0) detail::no_fit(scn, c.id);
        cap.place(c, chosen);
        p.assignment.push_back(chosen);
        cursor = (chosen + 1) % m_count;
    }
    return p;
}

/// Demand size key used whenever containers are packed hardest-first:
/// the larger demand fraction relative to the biggest machine.
inline std::vector<int> containers_by_descending_demand(const Scenario& scn) {
    double max_cpu = 0.0, max_mem = 0.0;
    for (const auto& m : scn.machines) {
        max_cpu = std::max(max_cpu, m.cpu_capacity);
        max_mem = std::max(max_mem, m.mem_capacity);
    }
    std::vector<int> order(scn.containers.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int c) {
        return std::max(scn.containers[c].cpu_demand / max_cpu,
                        scn.containers[c].mem_demand / max_mem);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key(a) > key(b); });
    return order;
}

/// First-fit over a caller-chosen container order. Returns nullopt when some
/// container fits nowhere.
inline std::optional<Placement> first_fit_in_order(const Scenario& scn,
                                                   const std::vector<int>& container_order,
                                                   const std::vector<int>& machine_order) {
    detail::CapacityTracker cap(scn);
    Placement p;
    p.assignment.assign(scn.containers.size(), -1);
    for (int c : container_order) {
        int chosen = -1;
        for (int m : machine_order) {
            if (cap.fits(scn.containers[c], m)) {
                chosen = m;
                break;
            }
        }
        if (chosen < 0) return std::nullopt;
        cap.place(scn.containers[c], chosen);
        p.assignment[c] = chosen;
    }
    return p;
}

/// First-fit-decreasing packing check; the generator and the GA initializer
/// use it as the feasibility fallback. Not one of the comparison baselines.
inline std::optional<Placement> first_fit_decreasing(const Scenario& scn) {
    std::vector<int> machine_order(scn.machines.size());
    std::iota(machine_order.begin(), machine_order.end(), 0);
    return first_fit_in_order(scn, containers_by_descending_demand(scn), machine_order);
}

} // namespace dsom
