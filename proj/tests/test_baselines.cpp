#include <doctest.h>

#include <numeric>

#include "dsom/baselines.hpp"
#include "dsom/fitness.hpp"
#include "dsom/generator.hpp"
#include "helpers.hpp"

using namespace dsom;
using testutil::make_scenario;
using testutil::uniform_machines;

TEST_CASE("maxutil stacks onto the fullest feasible machine") {
    SUBCASE("two identical containers end up together on machine 0") {
        const auto scn = make_scenario(uniform_machines(2), {{30, 30}, {30, 30}});
        CHECK(schedule_max_utilization_first(scn).assignment == std::vector<int>{0, 0});
    }
    SUBCASE("an oversized container falls through to the next-highest load") {
        // machine 0 gets filled to 90; the (20, 20) container no longer fits it
        const auto scn = make_scenario(uniform_machines(3), {{90, 90}, {50, 50}, {20, 20}});
        const auto p = schedule_max_utilization_first(scn);
        CHECK(p.assignment[0] == 0);
        CHECK(p.assignment[1] == 1);
        CHECK(p.assignment[2] == 1);  // machine 1 at 0.5 beats machine 2 at 0
    }
    SUBCASE("a full generated scale stays within capacity") {
        const auto scn = generate_scenario({"S1", 80, 8}, 1);
        const auto p = schedule_max_utilization_first(scn);
        CHECK(is_feasible(scn, p));
        CHECK(active_machine_count(scn, p) <= 8);
    }
}

TEST_CASE("fcfs first-fits in input order") {
    SUBCASE("everything fits machine 0") {
        const auto scn = make_scenario(uniform_machines(3), {{20, 20}, {20, 20}, {20, 20}});
        const auto p = schedule_fcfs(scn);
        CHECK(p.assignment == std::vector<int>{0, 0, 0});
        CHECK(active_machine_count(scn, p) == 1);
    }
    SUBCASE("overflow moves to machine 1") {
        const auto scn = make_scenario(uniform_machines(2), {{60, 60}, {60, 60}});
        CHECK(schedule_fcfs(scn).assignment == std::vector<int>{0, 1});
    }
    SUBCASE("identical machines are interchangeable: relabeling changes nothing") {
        // first-fit scans by machine id, so only capacity-preserving relabels
        // are symmetries; with identical machines any permutation is one
        const auto scn = make_scenario(uniform_machines(3),
                                       {{50, 50}, {30, 30}, {35, 35}, {20, 20}});
        const auto p = schedule_fcfs(scn);
        for (const std::vector<int>& perm : {std::vector<int>{2, 0, 1}, {1, 2, 0}, {2, 1, 0}}) {
            auto [relabeled, mapped] = testutil::relabel_machines(scn, p, perm);
            const auto q = schedule_fcfs(relabeled);
            CHECK(q == p);
            // and the relabeled run is metrically indistinguishable
            CHECK(active_machine_count(relabeled, q) == active_machine_count(scn, p));
            CHECK(is_feasible(relabeled, mapped));
        }
    }
}

TEST_CASE("round robin cycles with feasibility skip") {
    SUBCASE("4 containers over 2 roomy machines alternate") {
        const auto scn = make_scenario(uniform_machines(2),
                                       {{10, 10}, {10, 10}, {10, 10}, {10, 10}});
        CHECK(schedule_round_robin(scn).assignment == std::vector<int>{0, 1, 0, 1});
    }
    SUBCASE("3 containers over 3 machines spread maximally") {
        const auto scn = make_scenario(uniform_machines(3), {{10, 10}, {10, 10}, {10, 10}});
        const auto p = schedule_round_robin(scn);
        CHECK(active_machine_count(scn, p) == 3);
    }
    SUBCASE("cursor skips machines that cannot fit") {
        const auto scn = make_scenario({{4, 4}, {4, 4}, {20, 20}}, {{10, 10}, {2, 2}});
        const auto p = schedule_round_robin(scn);
        CHECK(p.assignment[0] == 2);  // only machine 2 can host it
        CHECK(p.assignment[1] == 0);  // cursor wrapped past 2
    }
}

TEST_CASE("baselines are deterministic and never return infeasible placements") {
    const auto scn = generate_scenario({"base", 40, 6}, 9);
    for (auto* schedule : {&schedule_max_utilization_first, &schedule_fcfs,
                           &schedule_round_robin}) {
        const auto p = (*schedule)(scn);
        CHECK(is_feasible(scn, p));
        CHECK((*schedule)(scn) == p);
    }
}

TEST_CASE("all baselines throw when some container fits nowhere") {
    // two machines can hold one (60, 60) container each; the third is stranded
    const auto scn = make_scenario(uniform_machines(2), {{60, 60}, {60, 60}, {60, 60}});
    CHECK_THROWS_AS(schedule_max_utilization_first(scn), InfeasibleError);
    CHECK_THROWS_AS(schedule_fcfs(scn), InfeasibleError);
    CHECK_THROWS_AS(schedule_round_robin(scn), InfeasibleError);
}

TEST_CASE("round robin spreads over min(#machines, #containers) roomy machines") {
    for (std::uint64_t seed : {2u, 4u}) {
        const auto scn = generate_scenario({"rr", 9, 4}, seed);
        const auto p = schedule_round_robin(scn);
        CHECK(active_machine_count(scn, p) ==
              std::min(scn.num_machines(), scn.num_containers()));
    }
}
