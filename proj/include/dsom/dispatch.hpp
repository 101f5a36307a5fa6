#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"
#include "dsom/generator.hpp"
#include "dsom/rng.hpp"
#include "dsom/schedulers.hpp"

namespace dsom {

/// One data-collection work item. `arrival_tick` is the earliest tick the
/// task can be dispatched (the simulation clamps it to tick 1); an affinity
/// pins the task to one container node for its whole life.
struct CollectionTask {
    int id = 0;
    std::optional<int> node_affinity;
    double work_units = 0.0;
    long arrival_tick = 0;

    bool operator==(const CollectionTask&) const = default;
};

enum class NodeStatus { healthy, failed, restarting };

/// Working state of one container node during the simulation.
struct NodeState {
    int container_id = 0;
    NodeStatus status = NodeStatus::healthy;
    std::deque<int> queue;       // task ids; front is in flight
    double rate = 1.0;           // work units consumed per tick
    double queued_work = 0.0;    // remaining units across the queue
    long detect_tick = 0;        // when a pending failure gets noticed
    long restore_tick = 0;       // when a restarting node comes back
};

struct SimParams {
    double failure_rate = 0.0;  // per healthy node, per tick
    long restart_delay = 1;     // detection -> healthy again
    long detection_delay = 0;   // failure -> detection (monitor latency)
    double node_rate = 1.0;
    std::uint64_t seed = 0;
};

inline constexpr long kMaxSimulationTicks = 10'000'000;

/// What a simulation run produced. Consumed units count every unit applied to
/// a task, including progress later lost to failures, so consumed >= completed.
struct DispatchReport {
    long makespan_ticks = 0;
    int tasks_completed = 0;
    int restarts = 0;
    std::vector<long> completion_tick;  // indexed by task id
    double completed_work_units = 0.0;
    double consumed_work_units = 0.0;
};

namespace detail {

inline void validate_tasks(const Scenario& scn, const std::vector<CollectionTask>& tasks) {
    if (tasks.empty())
        throw StructuralError("task list is empty");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        if (t.id != static_cast<int>(i))
            throw StructuralError("task ids must be dense 0-based indices");
        if (t.work_units <= 0.0)
            throw StructuralError("task " + std::to_string(i) + " has non-positive work");
        if (t.arrival_tick < 0)
            throw StructuralError("task " + std::to_string(i) + " has negative arrival tick");
        if (t.node_affinity && (*t.node_affinity < 0 || *t.node_affinity >= scn.num_containers()))
            throw StructuralError("task " + std::to_string(i) + " pins an unknown container");
    }
}

} // namespace detail

/// Tick-driven simulation of the monitored collection loop.
///
/// Per tick: restarting nodes whose delay elapsed come back healthy; waiting
/// tasks are dispatched to the least-loaded healthy node (their pinned node
/// if they carry an affinity); healthy nodes consume `rate` units from their
/// queue front; then every healthy node fails independently with probability
/// failure_rate. The monitor notices a failure after detection_delay ticks,
/// schedules the restart, and moves the node's in-flight task, progress lost,
/// to the least-loaded other healthy node (pinned tasks wait for their node).
/// Failure draws are a pure function of (seed, node, tick), so raising the
/// rate only adds failure events. Runs until every task completed.
inline DispatchReport simulate_collection(const Scenario& scn, const Placement& placement,
                                          const std::vector<CollectionTask>& tasks,
                                          const SimParams& params) {
    validate(scn);
    validate_placement(scn, placement);
    if (!is_feasible(scn, placement))
        throw StructuralError("dispatch simulation requires a feasible placement");
    detail::validate_tasks(scn, tasks);
    if (params.failure_rate < 0.0 || params.failure_rate >= 1.0)
        throw StructuralError("failure_rate must lie in [0, 1)");
    if (params.restart_delay < 0 || params.detection_delay < 0)
        throw StructuralError("delays must be >= 0");
    if (params.node_rate <= 0.0)
        throw StructuralError("node_rate must be > 0");

    const int node_count = scn.num_containers();
    std::vector<NodeState> nodes(node_count);
    for (int i = 0; i < node_count; ++i) {
        nodes[i].container_id = i;
        nodes[i].rate = params.node_rate;
    }

    std::vector<double> remaining(tasks.size());
    for (const auto& t : tasks) remaining[t.id] = t.work_units;

    DispatchReport report;
    report.completion_tick.assign(tasks.size(), -1);

    // Tasks not yet on any node: unarrived tasks plus failure re-dispatches
    // that found no healthy node. Always scanned in ascending id order.
    std::vector<int> waiting(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) waiting[i] = static_cast<int>(i);

    auto least_loaded_healthy = [&](int exclude) {
        int best = -1;
        for (int i = 0; i < node_count; ++i) {
            if (i == exclude || nodes[i].status != NodeStatus::healthy) continue;
            if (best < 0 || nodes[i].queued_work < nodes[best].queued_work) best = i;
        }
        return best;
    };

    auto enqueue = [&](int task, int node) {
        nodes[node].queue.push_back(task);
        nodes[node].queued_work += remaining[task];
    };

    int completed = 0;
    for (long tick = 1; tick <= kMaxSimulationTicks; ++tick) {
        // Restarted nodes come back before anything else happens this tick.
        for (auto& node : nodes) {
            if (node.status == NodeStatus::restarting && tick >= node.restore_tick)
                node.status = NodeStatus::healthy;
        }

        // Dispatch whatever is waiting and due.
        std::vector<int> still_waiting;
        for (int task : waiting) {
            if (tasks[task].arrival_tick > tick) {
                still_waiting.push_back(task);
                continue;
            }
            if (tasks[task].node_affinity) {
                enqueue(task, *tasks[task].node_affinity);
                continue;
            }
            const int node = least_loaded_healthy(-1);
            if (node < 0) {
                still_waiting.push_back(task);
                continue;
            }
            enqueue(task, node);
        }
        waiting = std::move(still_waiting);

        // Healthy nodes work through their queues.
        for (auto& node : nodes) {
            if (node.status != NodeStatus::healthy) continue;
            double budget = node.rate;
            while (budget > 0.0 && !node.queue.empty()) {
                const int task = node.queue.front();
                const double step = std::min(budget, remaining[task]);
                remaining[task] -= step;
                node.queued_work -= step;
                budget -= step;
                report.consumed_work_units += step;
                if (remaining[task] <= 0.0) {
                    node.queue.pop_front();
                    report.completion_tick[task] = tick;
                    report.completed_work_units += tasks[task].work_units;
                    ++completed;
                }
            }
        }
        if (completed == static_cast<int>(tasks.size())) {
            report.makespan_ticks = tick;
            break;
        }

        // Failure draws, then the monitor pass for anything now detectable.
        for (int i = 0; i < node_count; ++i) {
            if (nodes[i].status != NodeStatus::healthy) continue;
            if (hash_uniform(params.seed, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(tick)) < params.failure_rate) {
                nodes[i].status = NodeStatus::failed;
                nodes[i].detect_tick = tick + params.detection_delay;
            }
        }
        for (int i = 0; i < node_count; ++i) {
            auto& node = nodes[i];
            if (node.status != NodeStatus::failed || tick < node.detect_tick) continue;
            node.status = NodeStatus::restarting;
            node.restore_tick = tick + params.restart_delay;
            ++report.restarts;
            if (node.queue.empty()) continue;
            const int task = node.queue.front();
            // In-flight progress is lost either way; pinned tasks wait for
            // their node, everything else moves on immediately.
            node.queued_work += tasks[task].work_units - remaining[task];
            remaining[task] = tasks[task].work_units;
            if (tasks[task].node_affinity) continue;
            node.queue.pop_front();
            node.queued_work -= remaining[task];
            const int target = least_loaded_healthy(i);
            if (target >= 0) {
                enqueue(task, target);
            } else {
                waiting.push_back(task);
                std::sort(waiting.begin(), waiting.end());
            }
        }
    }

    report.tasks_completed = completed;
    if (completed != static_cast<int>(tasks.size()))
        throw SimulationLimitError("dispatch simulation hit the " +
                                   std::to_string(kMaxSimulationTicks) + "-tick cap with " +
                                   std::to_string(completed) + "/" + std::to_string(tasks.size()) +
                                   " tasks complete");
    // every queue drained, so any residue means the load accounting drifted
    for (const auto& node : nodes) {
        if (!node.queue.empty() || std::abs(node.queued_work) > 1e-6)
            throw Error("dispatch accounting drift on node " +
                        std::to_string(node.container_id));
    }
    return report;
}

/// Generates the scenario for a scale, places it with the chosen scheduler,
/// and runs the collection simulation on the result. The one seed drives both
/// scenario generation and the failure stream, so different schedulers face
/// identical conditions; the GA additionally folds it into its own seed.
inline DispatchReport dispatch_with_scheduler(const ScaleConfig& config,
                                              const std::vector<CollectionTask>& tasks,
                                              Algorithm algo, const FitnessWeights& weights,
                                              GAParams ga_params, const SimParams& params) {
    const Scenario scn = generate_scenario(config, params.seed);
    ga_params.seed = mix_seed(ga_params.seed, params.seed);
    const Placement placement = run_scheduler(scn, algo, weights, ga_params);
    return simulate_collection(scn, placement, tasks, params);
}

// Task list file schema (JSON array):
//   [{"work_units": number, "arrival_tick": integer, "affinity": container id (optional)}, ...]

inline std::vector<CollectionTask> tasks_from_json(const nlohmann::json& j) {
    std::vector<CollectionTask> tasks;
    try {
        if (!j.is_array())
            throw StructuralError("task document must be a JSON array");
        int id = 0;
        for (const auto& item : j) {
            CollectionTask t;
            t.id = id++;
            t.work_units = item.at("work_units").get<double>();
            t.arrival_tick = item.value("arrival_tick", 0L);
            if (item.contains("affinity")) t.node_affinity = item.at("affinity").get<int>();
            tasks.push_back(t);
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("bad task document: ") + e.what());
    }
    return tasks;
}

inline std::vector<CollectionTask> load_tasks(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw StructuralError("cannot read task file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("task file is not valid JSON: ") + e.what());
    }
    return tasks_from_json(j);
}

/// Uniform synthetic task list for benchmark runs: work in [1, max_work],
/// arrivals in [0, arrival_span].
inline std::vector<CollectionTask> generate_tasks(int count, double max_work, long arrival_span,
                                                  std::uint64_t seed) {
    if (count < 1 || max_work < 1.0 || arrival_span < 0)
        throw StructuralError("bad task generation parameters");
    Rng rng(mix_seed(seed, 0x7A5C));
    std::vector<CollectionTask> tasks;
    tasks.reserve(count);
    for (int i = 0; i < count; ++i) {
        CollectionTask t;
        t.id = i;
        t.work_units = rng.uniform_int(1, static_cast<int>(max_work));
        t.arrival_tick = arrival_span == 0 ? 0 : rng.uniform_int(0, static_cast<int>(arrival_span));
        tasks.push_back(t);
    }
    return tasks;
}

} // namespace dsom
