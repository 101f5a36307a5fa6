#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"
#include "dsom/fitness.hpp"

namespace dsom {

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

/// Exhaustive search over all machines^containers total assignments.
///
/// Returns the feasible placement with maximum objective total; ties go to
/// the lexicographically smallest assignment vector. Guarded: throws
/// GuardError when the assignment space exceeds 10^6, InfeasibleError when
/// no feasible assignment exists.
inline std::pair<Placement, FitnessBreakdown> brute_force_optimum(const Scenario& scn,
                                                                  const FitnessWeights& weights) {
    validate(scn);
    validate(weights);
    const int n = scn.num_containers();
    const int m = scn.num_machines();
    if (n < 1)
        throw StructuralError("brute force needs at least one container");

    std::uint64_t space = 1;
    for (int i = 0; i < n; ++i) {
        space *= static_cast<std::uint64_t>(m);
        if (space > kBruteForceLimit)
            throw GuardError("assignment space exceeds " + std::to_string(kBruteForceLimit) +
                             "; refusing exhaustive search");
    }

    Placement current;
    current.assignment.assign(n, 0);
    bool have_best = false;
    Placement best;
    FitnessBreakdown best_fit;

    // Odometer enumeration is lexicographic, so keeping only strict
    // improvements realizes the smallest-vector tie-break.
    while (true) {
        if (is_feasible(scn, current)) {
            const FitnessBreakdown fit = fitness(scn, current, weights);
            if (!have_best || fit.total > best_fit.total) {
                have_best = true;
                best = current;
                best_fit = fit;
            }
        }
        int pos = n - 1;
        while (pos >= 0 && current.assignment[pos] == m - 1) {
            current.assignment[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++current.assignment[pos];
    }

    if (!have_best)
        throw InfeasibleError("no feasible assignment exists for scenario '" + scn.name + "'");
    return {std::move(best), best_fit};
}

} // namespace dsom
