#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "dsom/baselines.hpp"
#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"
#include "dsom/fitness.hpp"
#include "dsom/rng.hpp"

namespace dsom {

/// Genetic-scheduler knobs. All defaults are tuned for the built-in scales;
/// stall_generations <= 0 disables the stall stop.
struct GAParams {
    int population_size = 50;
    int max_generations = 200;
    int stall_generations = 30;
    int tournament_size = 2;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::uint64_t seed = 0;
};

inline void validate(const GAParams& p) {
    if (p.population_size < 2)
        throw StructuralError("population_size must be >= 2");
    if (p.max_generations < 1)
        throw StructuralError("max_generations must be >= 1");
    if (p.tournament_size < 2 || p.tournament_size > p.population_size)
        throw StructuralError("tournament_size must be in [2, population_size]");
    if (p.crossover_rate < 0.0 || p.crossover_rate > 1.0 ||
        p.mutation_rate < 0.0 || p.mutation_rate > 1.0)
        throw StructuralError("rates must lie in [0, 1]");
}

struct GenerationStats {
    double best_total = 0.0;
    double mean_total = 0.0;
};

struct GARunResult {
    Placement best_placement;
    FitnessBreakdown best_fitness;
    std::vector<GenerationStats> history;  // one entry per offspring generation
    int generations_run = 0;
    std::uint64_t evaluations = 0;
};

/// Optional per-generation inspection hook; generation 0 is the initial
/// population. Must not mutate anything.
using GenerationObserver =
    std::function<void(int generation, const std::vector<Placement>&,
                       const std::vector<FitnessBreakdown>&)>;

/// Builds population_size feasible placements, each by first-fit over an
/// independently shuffled container order and machine order. A shuffle that
/// first-fit cannot pack is redrawn up to 100 times, then first-fit-decreasing
/// is used; if that also fails the scenario is infeasible.
inline std::vector<Placement> initialize_population(const Scenario& scn, const GAParams& params,
                                                    Rng& rng) {
    validate(scn);
    validate(params);
    std::vector<int> container_order(scn.containers.size());
    std::vector<int> machine_order(scn.machines.size());
    std::vector<Placement> population;
    population.reserve(params.population_size);
    for (int i = 0; i < params.population_size; ++i) {
        std::optional<Placement> individual;
        for (int attempt = 0; attempt < 100 && !individual; ++attempt) {
            std::iota(container_order.begin(), container_order.end(), 0);
            std::iota(machine_order.begin(), machine_order.end(), 0);
            rng.shuffle(container_order);
            rng.shuffle(machine_order);
            individual = first_fit_in_order(scn, container_order, machine_order);
        }
        if (!individual) individual = first_fit_decreasing(scn);
        if (!individual)
            throw InfeasibleError("scenario '" + scn.name + "' admits no feasible placement");
        population.push_back(std::move(*individual));
    }
    return population;
}

inline std::vector<Placement> initialize_population(const Scenario& scn, const GAParams& params) {
    Rng rng(params.seed);
    return initialize_population(scn, params, rng);
}

/// Draws tournament_size indices uniformly with replacement and returns the
/// one with the highest objective total; ties go to the lower index.
inline std::size_t tournament_select(const std::vector<FitnessBreakdown>& fitnesses,
                                     const GAParams& params, Rng& rng) {
    if (fitnesses.empty())
        throw StructuralError("tournament over an empty population");
    std::size_t best = rng.uniform_index(fitnesses.size());
    for (int k = 1; k < params.tournament_size; ++k) {
        const std::size_t cand = rng.uniform_index(fitnesses.size());
        if (fitnesses[cand].total > fitnesses[best].total ||
            (fitnesses[cand].total == fitnesses[best].total && cand < best))
            best = cand;
    }
    return best;
}

namespace detail {

inline bool within_capacity(const Scenario& scn, const PlacementState& st, int m) {
    return st.cpu_used(m) <= scn.machines[m].cpu_capacity &&
           st.mem_used(m) <= scn.machines[m].mem_capacity;
}

inline double demand_fraction(const Scenario& scn, int c, double max_cpu, double max_mem) {
    return std::max(scn.containers[c].cpu_demand / max_cpu,
                    scn.containers[c].mem_demand / max_mem);
}

/// Sorts container ids hardest-to-place first; ties stay in id order.
inline void sort_by_descending_demand(const Scenario& scn, std::vector<int>& ids) {
    double max_cpu = 0.0, max_mem = 0.0;
    for (const auto& m : scn.machines) {
        max_cpu = std::max(max_cpu, m.cpu_capacity);
        max_mem = std::max(max_mem, m.mem_capacity);
    }
    std::sort(ids.begin(), ids.end());
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        return demand_fraction(scn, a, max_cpu, max_mem) >
               demand_fraction(scn, b, max_cpu, max_mem);
    });
}

/// Makes every machine respect capacity by evicting, per overloaded machine,
/// the container with the least traffic to its machine-mates until the
/// machine fits. Returns the evicted ids.
inline std::vector<int> evict_overloads(const Scenario& scn, PlacementState& st) {
    std::vector<int> evicted;
    const int n = scn.num_containers();
    for (int m = 0; m < scn.num_machines(); ++m) {
        while (!within_capacity(scn, st, m)) {
            int victim = -1;
            double victim_w = std::numeric_limits<double>::infinity();
            for (int c = 0; c < n; ++c) {
                if (st.machine_of(c) != m) continue;
                const double w = st.colocated_weight(c, m);
                if (w < victim_w) {
                    victim = c;
                    victim_w = w;
                }
            }
            st.unassign(victim);
            evicted.push_back(victim);
        }
    }
    return evicted;
}

/// Places each id (hardest first) on the candidate machine maximizing the
/// objective of the partial assignment; ties go to the lower machine id.
/// `candidates` must be sorted ascending. Returns false if something fits
/// nowhere (state is then abandoned by the caller).
inline bool reinsert_by_fitness(const Scenario& scn, PlacementState& st,
                                std::vector<int> pending, const std::vector<int>& candidates,
                                const FitnessWeights& weights) {
    sort_by_descending_demand(scn, pending);
    for (int c : pending) {
        int best_m = -1;
        double best_total = -std::numeric_limits<double>::infinity();
        for (int m : candidates) {
            if (!st.fits(c, m)) continue;
            const double total = st.score_assign(c, m, weights);
            if (total > best_total) {
                best_total = total;
                best_m = m;
            }
        }
        if (best_m < 0) return false;
        st.assign(c, best_m);
    }
    return true;
}

} // namespace detail

/// Two-point gene exchange followed by repair: overloaded machines shed their
/// lowest-affinity containers, which are then re-placed wherever the partial
/// objective is highest. A child whose repair strands a container degenerates
/// to a copy of its parent, so both children are always feasible.
inline std::pair<Placement, Placement> crossover(const Placement& parent_a, const Placement& parent_b,
                                                 const Scenario& scn, const CommAdjacency& adj,
                                                 const FitnessWeights& weights, Rng& rng) {
    const int n = scn.num_containers();
    int cut1 = rng.uniform_int(0, n);
    int cut2 = rng.uniform_int(0, n);
    if (cut1 > cut2) std::swap(cut1, cut2);

    std::vector<int> all_machines(scn.machines.size());
    std::iota(all_machines.begin(), all_machines.end(), 0);

    auto make_child = [&](const Placement& base, const Placement& donor) {
        Placement child = base;
        for (int c = cut1; c < cut2; ++c) child.assignment[c] = donor.assignment[c];
        PlacementState st(scn, adj);
        for (int c = 0; c < n; ++c) st.assign(c, child.assignment[c]);
        const std::vector<int> evicted = detail::evict_overloads(scn, st);
        if (evicted.empty()) return child;
        if (!detail::reinsert_by_fitness(scn, st, evicted, all_machines, weights))
            return base;  // repair failed: crossover degenerates to copy
        return st.to_placement();
    };

    return {make_child(parent_a, parent_b), make_child(parent_b, parent_a)};
}

inline std::pair<Placement, Placement> crossover(const Placement& parent_a, const Placement& parent_b,
                                                 const Scenario& scn, const FitnessWeights& weights,
                                                 Rng& rng) {
    const CommAdjacency adj(scn);
    return crossover(parent_a, parent_b, scn, adj, weights, rng);
}

/// Consolidation move: evacuates the lowest-loaded active host and re-places
/// its containers, hardest first, on the other active machines wherever the
/// partial objective is highest. Falls back to the unchanged individual when
/// any container has no target, so the result is always feasible.
inline Placement mutate(const Placement& individual, const Scenario& scn, const CommAdjacency& adj,
                        const FitnessWeights& weights, Rng& /*rng*/) {
    PlacementState st(scn, adj, individual);
    const auto loads = machine_loads(scn, individual);

    int host = -1;
    double host_load = std::numeric_limits<double>::infinity();
    std::vector<int> other_active;
    for (int m = 0; m < scn.num_machines(); ++m) {
        if (!loads[m].active) continue;
        if (loads[m].load < host_load) {
            if (host >= 0) other_active.push_back(host);
            host = m;
            host_load = loads[m].load;
        } else {
            other_active.push_back(m);
        }
    }
    if (host < 0 || other_active.empty()) return individual;
    std::sort(other_active.begin(), other_active.end());

    std::vector<int> evacuated;
    for (int c = 0; c < scn.num_containers(); ++c) {
        if (st.machine_of(c) == host) evacuated.push_back(c);
    }
    for (int c : evacuated) st.unassign(c);

    if (!detail::reinsert_by_fitness(scn, st, evacuated, other_active, weights))
        return individual;
    return st.to_placement();
}

inline Placement mutate(const Placement& individual, const Scenario& scn,
                        const FitnessWeights& weights, Rng& rng) {
    const CommAdjacency adj(scn);
    return mutate(individual, scn, adj, weights, rng);
}

/// Runs the full genetic schedule: tournament parents, crossover with repair,
/// worst-first mutation, and from the second generation on an elitist merge
/// of parents and offspring truncated back to population_size. Stops at
/// max_generations or once the best objective has not improved for
/// stall_generations. Bit-reproducible for a fixed seed.
inline GARunResult dsom_schedule(const Scenario& scn, const FitnessWeights& weights,
                                 const GAParams& params, const GenerationObserver& observer = {}) {
    validate(scn);
    validate(weights);
    validate(params);
    if (scn.containers.empty())
        throw StructuralError("cannot schedule a scenario with no containers");

    const CommAdjacency adj(scn);
    Rng rng(params.seed);
    GARunResult result;

    auto evaluate_all = [&](const std::vector<Placement>& pop) {
        std::vector<FitnessBreakdown> fits;
        fits.reserve(pop.size());
        for (const auto& p : pop) {
            fits.push_back(fitness(scn, p, weights));
            ++result.evaluations;
        }
        return fits;
    };

    std::vector<Placement> population = initialize_population(scn, params, rng);
    std::vector<FitnessBreakdown> fits = evaluate_all(population);
    if (observer) observer(0, population, fits);

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < fits.size(); ++i) {
        if (fits[i].total > fits[best_idx].total) best_idx = i;
    }
    result.best_placement = population[best_idx];
    result.best_fitness = fits[best_idx];

    const std::size_t pop_size = static_cast<std::size_t>(params.population_size);
    int stall = 0;
    for (int gen = 1; gen <= params.max_generations; ++gen) {
        std::vector<Placement> offspring;
        offspring.reserve(pop_size);
        while (offspring.size() < pop_size) {
            const std::size_t pa = tournament_select(fits, params, rng);
            const std::size_t pb = tournament_select(fits, params, rng);
            if (rng.uniform() < params.crossover_rate) {
                auto [ca, cb] = crossover(population[pa], population[pb], scn, adj, weights, rng);
                offspring.push_back(std::move(ca));
                if (offspring.size() < pop_size) offspring.push_back(std::move(cb));
            } else {
                offspring.push_back(population[pa]);
                if (offspring.size() < pop_size) offspring.push_back(population[pb]);
            }
        }
        std::vector<FitnessBreakdown> off_fits = evaluate_all(offspring);

        // Mutation sweeps the offspring worst-first.
        std::vector<std::size_t> order(offspring.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return off_fits[a].total < off_fits[b].total;
        });
        for (std::size_t idx : order) {
            if (rng.uniform() >= params.mutation_rate) continue;
            Placement mutated = mutate(offspring[idx], scn, adj, weights, rng);
            if (!(mutated == offspring[idx])) {
                offspring[idx] = std::move(mutated);
                off_fits[idx] = fitness(scn, offspring[idx], weights);
                ++result.evaluations;
            }
        }

        if (gen == 1) {
            // Merging starts with the second generation; the first offspring
            // population replaces its parents outright.
            population = std::move(offspring);
            fits = std::move(off_fits);
        } else {
            std::vector<std::size_t> merged(population.size() + offspring.size());
            std::iota(merged.begin(), merged.end(), 0);
            auto total_of = [&](std::size_t i) {
                return i < population.size() ? fits[i].total : off_fits[i - population.size()].total;
            };
            std::stable_sort(merged.begin(), merged.end(), [&](std::size_t a, std::size_t b) {
                return total_of(a) > total_of(b);
            });
            std::vector<Placement> next_pop;
            std::vector<FitnessBreakdown> next_fits;
            next_pop.reserve(pop_size);
            next_fits.reserve(pop_size);
            for (std::size_t k = 0; k < pop_size; ++k) {
                const std::size_t i = merged[k];
                if (i < population.size()) {
                    next_pop.push_back(std::move(population[i]));
                    next_fits.push_back(fits[i]);
                } else {
                    next_pop.push_back(std::move(offspring[i - population.size()]));
                    next_fits.push_back(off_fits[i - population.size()]);
                }
            }
            population = std::move(next_pop);
            fits = std::move(next_fits);
        }

        std::size_t gen_best = 0;
        double mean = 0.0;
        for (std::size_t i = 0; i < fits.size(); ++i) {
            mean += fits[i].total;
            if (fits[i].total > fits[gen_best].total) gen_best = i;
        }
        mean /= static_cast<double>(fits.size());
        result.history.push_back({fits[gen_best].total, mean});
        result.generations_run = gen;
        if (observer) observer(gen, population, fits);

        if (fits[gen_best].total > result.best_fitness.total) {
            result.best_fitness = fits[gen_best];
            result.best_placement = population[gen_best];
            stall = 0;
        } else {
            ++stall;
        }
        if (params.stall_generations > 0 && stall >= params.stall_generations) break;
    }
    return result;
}

} // namespace dsom
