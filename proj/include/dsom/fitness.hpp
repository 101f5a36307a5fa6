#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"

namespace dsom {

/// Objective weights for the consolidation, load-balance and communication
/// terms. Must be non-negative and sum to 1 within 1e-12.
struct FitnessWeights {
    double alpha = 0.2;
    double beta = 0.5;
    double lambda = 0.3;

    bool operator==(const FitnessWeights&) const = default;
};

inline void validate(const FitnessWeights& w) {
    if (w.alpha < 0.0 || w.beta < 0.0 || w.lambda < 0.0)
        throw StructuralError("fitness weights must be non-negative");
    if (std::abs(w.alpha + w.beta + w.lambda - 1.0) > 1e-12)
        throw StructuralError("fitness weights must sum to 1");
}

/// N never enters the objective below this floor; caps the communication
/// core at exactly 1 and keeps the objective total for N = 0.
inline constexpr double kCommCostFloor = 0.001;

/// Full decomposition of one objective evaluation.
///
/// Cores: d_term = 1/D, balance_term = U/Z, comm_term = 1/(1000 * max(N, floor)).
/// total = 1000 * (alpha*d_term + beta*balance_term + lambda*comm_term);
/// higher is better. `feasible` records whether the placement respected all
/// capacities; the value is computed either way.
struct FitnessBreakdown {
    double d_term = 0.0;
    double balance_term = 0.0;
    double comm_term = 0.0;
    double total = 0.0;
    int active_machines = 0;  // D
    double max_load = 0.0;    // Z
    double mean_load = 0.0;   // U
    double comm_cost = 0.0;   // N
    bool feasible = false;
};

/// Total traffic between containers placed on different machines.
inline double comm_cost(const Scenario& scn, const Placement& p) {
    validate_placement(scn, p);
    double n = 0.0;
    for (const auto& e : scn.comm.edges) {
        if (p.assignment[e.a] != p.assignment[e.b]) n += e.weight;
    }
    return n;
}

namespace detail {

/// Assembles the breakdown from the four aggregate quantities. Each weighted
/// core is scaled by 1000 separately so that the all-ones case sums to an
/// exact 1000.
inline FitnessBreakdown assemble_breakdown(int d, double z, double u, double n,
                                           const FitnessWeights& w, bool feasible) {
    FitnessBreakdown out;
    out.active_machines = d;
    out.max_load = z;
    out.mean_load = u;
    out.comm_cost = n;
    out.feasible = feasible;
    out.d_term = 1.0 / static_cast<double>(d);
    out.balance_term = u / z;
    out.comm_term = 1.0 / (1000.0 * std::max(n, kCommCostFloor));
    out.total = 1000.0 * w.alpha * out.d_term +
                1000.0 * w.beta * out.balance_term +
                1000.0 * w.lambda * out.comm_term;
    return out;
}

} // namespace detail

/// Evaluates the objective for a total placement.
///
/// D is the number of active machines, U and Z the mean and maximum load over
/// active machines only, N the cut traffic. Requires at least one container;
/// infeasible placements are evaluated but flagged.
inline FitnessBreakdown fitness(const Scenario& scn, const Placement& p, const FitnessWeights& w) {
    validate(w);
    if (scn.containers.empty())
        throw StructuralError("fitness requires at least one container");
    const auto loads = machine_loads(scn, p);
    int d = 0;
    double sum = 0.0, z = 0.0;
    for (const auto& l : loads) {
        if (!l.active) continue;
        ++d;
        sum += l.load;
        z = std::max(z, l.load);
    }
    const double u = sum / d;
    return detail::assemble_breakdown(d, z, u, comm_cost(scn, p), w, is_feasible(scn, p));
}

/// Neighbor lists over the comm graph; build once per scenario and share.
struct CommAdjacency {
    std::vector<std::vector<std::pair<int, double>>> neighbors;

    explicit CommAdjacency(const Scenario& scn) : neighbors(scn.containers.size()) {
        for (const auto& e : scn.comm.edges) {
            neighbors[e.a].emplace_back(e.b, e.weight);
            neighbors[e.b].emplace_back(e.a, e.weight);
        }
    }
};

/// Mutable partial placement with O(degree) assign/unassign and O(#machines)
/// objective evaluation. This is the engine behind the GA's repair and
/// reinsertion decisions; `fitness()` above stays the straight-line reference
/// for total placements.
class PlacementState {
public:
    PlacementState(const Scenario& scn, const CommAdjacency& adj)
        : scn_(&scn), adj_(&adj),
          assigned_(scn.containers.size(), kUnassigned),
          cpu_used_(scn.machines.size(), 0.0),
          mem_used_(scn.machines.size(), 0.0),
          count_(scn.machines.size(), 0) {}

    PlacementState(const Scenario& scn, const CommAdjacency& adj, const Placement& p)
        : PlacementState(scn, adj) {
        validate_placement(scn, p);
        for (std::size_t c = 0; c < p.assignment.size(); ++c)
            assign(static_cast<int>(c), p.assignment[c]);
    }

    static constexpr int kUnassigned = -1;

    int machine_of(int c) const { return assigned_[c]; }
    int assigned_count() const { return assigned_total_; }
    double cut_weight() const { return cut_; }
    double cpu_used(int m) const { return cpu_used_[m]; }
    double mem_used(int m) const { return mem_used_[m]; }
    int container_count(int m) const { return count_[m]; }

    bool fits(int c, int m) const {
        const auto& spec = scn_->containers[c];
        const auto& host = scn_->machines[m];
        return cpu_used_[m] + spec.cpu_demand <= host.cpu_capacity &&
               mem_used_[m] + spec.mem_demand <= host.mem_capacity;
    }

    void assign(int c, int m) {
        assigned_[c] = m;
        cpu_used_[m] += scn_->containers[c].cpu_demand;
        mem_used_[m] += scn_->containers[c].mem_demand;
        ++count_[m];
        ++assigned_total_;
        for (const auto& [nbr, w] : adj_->neighbors[c]) {
            if (assigned_[nbr] != kUnassigned && assigned_[nbr] != m) cut_ += w;
        }
    }

    void unassign(int c) {
        const int m = assigned_[c];
        assigned_[c] = kUnassigned;
        cpu_used_[m] -= scn_->containers[c].cpu_demand;
        mem_used_[m] -= scn_->containers[c].mem_demand;
        --count_[m];
        --assigned_total_;
        for (const auto& [nbr, w] : adj_->neighbors[c]) {
            if (assigned_[nbr] != kUnassigned && assigned_[nbr] != m) cut_ -= w;
        }
    }

    /// Traffic between container c and containers currently assigned to m.
    double colocated_weight(int c, int m) const {
        double w_sum = 0.0;
        for (const auto& [nbr, w] : adj_->neighbors[c]) {
            if (assigned_[nbr] == m) w_sum += w;
        }
        return w_sum;
    }

    /// Objective over the currently assigned containers. Requires at least
    /// one assignment.
    FitnessBreakdown evaluate(const FitnessWeights& w) const {
        int d = 0;
        double sum = 0.0, z = 0.0;
        bool feasible = true;
        for (std::size_t m = 0; m < count_.size(); ++m) {
            const auto& host = scn_->machines[m];
            if (cpu_used_[m] > host.cpu_capacity || mem_used_[m] > host.mem_capacity)
                feasible = false;
            if (count_[m] == 0) continue;
            ++d;
            const double load = (cpu_used_[m] / host.cpu_capacity +
                                 mem_used_[m] / host.mem_capacity) / 2.0;
            sum += load;
            z = std::max(z, load);
        }
        return detail::assemble_breakdown(d, z, sum / d, cut_, w, feasible);
    }

    /// Objective total if c were assigned to m; state is left unchanged.
    double score_assign(int c, int m, const FitnessWeights& w) {
        assign(c, m);
        const double total = evaluate(w).total;
        unassign(c);
        return total;
    }

    /// Snapshot into a total Placement. Requires every container assigned.
    Placement to_placement() const {
        if (assigned_total_ != static_cast<int>(assigned_.size()))
            throw StructuralError("placement snapshot of a partial assignment");
        return Placement{assigned_};
    }

private:
    const Scenario* scn_;
    const CommAdjacency* adj_;
    std::vector<int> assigned_;
    std::vector<double> cpu_used_;
    std::vector<double> mem_used_;
    std::vector<int> count_;
    double cut_ = 0.0;
    int assigned_total_ = 0;
};

} // namespace dsom
