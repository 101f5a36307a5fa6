#include <doctest.h>

#include <cmath>

#include "dsom/fitness.hpp"
#include "dsom/generator.hpp"
#include "dsom/oracle.hpp"
#include "helpers.hpp"

using namespace dsom;
using testutil::make_scenario;
using testutil::uniform_machines;

namespace {

const FitnessWeights kWeights{0.2, 0.5, 0.3};

// Independent recursive enumerator used to cross-check the iterative oracle.
// Same tie rule: the first strictly-better assignment in lexicographic DFS
// order wins, so ties keep the smallest vector.
void enumerate(const Scenario& scn, Placement& current, int depth, Placement& best,
               double& best_total, bool& found) {
    if (depth == scn.num_containers()) {
        if (!is_feasible(scn, current)) return;
        const double total = fitness(scn, current, kWeights).total;
        if (!found || total > best_total) {
            found = true;
            best = current;
            best_total = total;
        }
        return;
    }
    for (int m = 0; m < scn.num_machines(); ++m) {
        current.assignment[depth] = m;
        enumerate(scn, current, depth + 1, best, best_total, found);
    }
}

} // namespace

TEST_CASE("one container, two identical machines: machine 0 by tie-break") {
    const auto scn = make_scenario(uniform_machines(2), {{10, 10}});
    const auto [p, fit] = brute_force_optimum(scn, kWeights);
    CHECK(p.assignment == std::vector<int>{0});
    CHECK(fit.total == 1000.0);
}

TEST_CASE("a communicating pair that fits together gets co-located") {
    const auto scn = make_scenario(uniform_machines(2), {{20, 20}, {20, 20}}, {{0, 1, 9.0}});
    const auto [p, fit] = brute_force_optimum(scn, kWeights);
    CHECK(p.assignment == std::vector<int>{0, 0});
    CHECK(fit.comm_cost == 0.0);
    CHECK(fit.active_machines == 1);
}

TEST_CASE("iterative oracle equals an independent recursive enumerator") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto scn = generate_scenario({"toy", 6, 3}, seed);
        const auto [p, fit] = brute_force_optimum(scn, kWeights);

        Placement current;
        current.assignment.assign(scn.num_containers(), 0);
        Placement best;
        double best_total = 0.0;
        bool found = false;
        enumerate(scn, current, 0, best, best_total, found);

        REQUIRE(found);
        CHECK(fit.total == best_total);
        CHECK(p == best);
    }
}

TEST_CASE("the size guard refuses oversized instances") {
    std::vector<std::pair<double, double>> containers(13, {1.0, 1.0});
    const auto scn = make_scenario(uniform_machines(3), containers);
    CHECK_THROWS_AS(brute_force_optimum(scn, kWeights), GuardError);  // 3^13 > 10^6
}

TEST_CASE("an unpackable scenario reports infeasibility") {
    const auto scn = make_scenario(uniform_machines(1), {{60, 60}, {60, 60}});
    CHECK_THROWS_AS(brute_force_optimum(scn, kWeights), InfeasibleError);
}
