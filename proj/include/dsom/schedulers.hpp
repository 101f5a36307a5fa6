#pragma once

#include <string>

#include "dsom/baselines.hpp"
#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"
#include "dsom/fitness.hpp"
#include "dsom/ga.hpp"

namespace dsom {

enum class Algorithm { dsom, maxutil, fcfs, roundrobin };

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::dsom: return "dsom";
        case Algorithm::maxutil: return "maxutil";
        case Algorithm::fcfs: return "fcfs";
        case Algorithm::roundrobin: return "roundrobin";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "dsom") return Algorithm::dsom;
    if (name == "maxutil") return Algorithm::maxutil;
    if (name == "fcfs") return Algorithm::fcfs;
    if (name == "roundrobin") return Algorithm::roundrobin;
    throw StructuralError("unknown algorithm '" + name +
                          "' (expected dsom, maxutil, fcfs or roundrobin)");
}

/// Runs the chosen scheduler on a scenario. Only dsom consumes the weights
/// and GA parameters; the baselines are deterministic and comm-blind.
inline Placement run_scheduler(const Scenario& scn, Algorithm algo, const FitnessWeights& weights,
                               const GAParams& ga_params) {
    switch (algo) {
        case Algorithm::dsom: return dsom_schedule(scn, weights, ga_params).best_placement;
        case Algorithm::maxutil: return schedule_max_utilization_first(scn);
        case Algorithm::fcfs: return schedule_fcfs(scn);
        case Algorithm::roundrobin: return schedule_round_robin(scn);
    }
    throw StructuralError("unhandled algorithm");
}

} // namespace dsom
