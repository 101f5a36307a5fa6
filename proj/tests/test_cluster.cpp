#include <doctest.h>

#include "dsom/cluster.hpp"
#include "dsom/generator.hpp"
#include "helpers.hpp"

using namespace dsom;
using testutil::make_scenario;
using testutil::uniform_machines;

TEST_CASE("machine_loads: half-loaded, full and empty machines") {
    auto scn = make_scenario({{4, 4}}, {{2, 2}});
    auto loads = machine_loads(scn, Placement{{0}});
    CHECK(loads[0].load == doctest::Approx(0.5));
    CHECK(loads[0].active);

    scn = make_scenario({{4, 4}, {4, 4}}, {{2, 2}});
    loads = machine_loads(scn, Placement{{0}});
    CHECK(loads[1].load == 0.0);
    CHECK_FALSE(loads[1].active);

    scn = make_scenario({{4, 4}}, {{1, 3}, {3, 1}});
    loads = machine_loads(scn, Placement{{0, 0}});
    CHECK(loads[0].load == doctest::Approx(1.0));
}

TEST_CASE("active_machine_count") {
    SUBCASE("everything on one machine") {
        auto scn = make_scenario(uniform_machines(4), {{5, 5}, {5, 5}, {5, 5}});
        CHECK(active_machine_count(scn, Placement{{2, 2, 2}}) == 1);
    }
    SUBCASE("80 containers spread over all 8 machines") {
        std::vector<std::pair<double, double>> containers(80, {1.0, 1.0});
        auto scn = make_scenario(uniform_machines(8), containers);
        Placement p;
        for (int c = 0; c < 80; ++c) p.assignment.push_back(c % 8);
        CHECK(active_machine_count(scn, p) == 8);
    }
    SUBCASE("4 containers round-robined over 3 machines") {
        auto scn = make_scenario(uniform_machines(3), {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
        CHECK(active_machine_count(scn, Placement{{0, 1, 2, 0}}) == 3);
    }
}

TEST_CASE("is_feasible") {
    auto scn = make_scenario({{4, 4}}, {{3, 3}});
    CHECK(is_feasible(scn, Placement{{0}}));

    scn = make_scenario({{4, 4}, {4, 4}}, {{3, 1}, {3, 1}});
    CHECK_FALSE(is_feasible(scn, Placement{{0, 0}}));
    CHECK(is_feasible(scn, Placement{{0, 1}}));

    // vacuous: zero containers
    scn = make_scenario({{4, 4}}, {});
    CHECK(is_feasible(scn, Placement{{}}));
}

TEST_CASE("structural errors: partial placements and unknown machines") {
    const auto scn = make_scenario(uniform_machines(2), {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(machine_loads(scn, Placement{{0}}), StructuralError);
    CHECK_THROWS_AS(active_machine_count(scn, Placement{{0, 2}}), StructuralError);
    CHECK_THROWS_AS(is_feasible(scn, Placement{{-1, 0}}), StructuralError);
}

TEST_CASE("scenario validation rejects broken structures") {
    CHECK_THROWS_AS(make_scenario({}, {}), StructuralError);
    CHECK_THROWS_AS(make_scenario({{0, 4}}, {}), StructuralError);
    CHECK_THROWS_AS(make_scenario({{4, 4}}, {{5, 1}}), StructuralError);
    CHECK_THROWS_AS(make_scenario({{4, 4}}, {{-1, 1}}), StructuralError);
    CHECK_THROWS_AS(make_scenario(uniform_machines(1), {{1, 1}, {1, 1}},
                                  {{0, 0, 1.0}}),
                    StructuralError);
    CHECK_THROWS_AS(make_scenario(uniform_machines(1), {{1, 1}, {1, 1}},
                                  {{0, 1, 1.0}, {0, 1, 2.0}}),
                    StructuralError);
    CHECK_THROWS_AS(make_scenario(uniform_machines(1), {{1, 1}, {1, 1}},
                                  {{0, 1, -1.0}}),
                    StructuralError);
}

TEST_CASE("loads of feasible placements stay in [0, 1] and count bounds hold") {
    const ScaleConfig config{"prop", 24, 5};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto scn = generate_scenario(config, seed);
        for (const auto& p : testutil::random_feasible_placements(scn, 8, seed)) {
            REQUIRE(is_feasible(scn, p));
            for (const auto& l : machine_loads(scn, p)) {
                CHECK(l.load >= 0.0);
                CHECK(l.load <= 1.0);
            }
            const int d = active_machine_count(scn, p);
            CHECK(d >= 1);
            CHECK(d <= std::min(scn.num_machines(), scn.num_containers()));
        }
    }
}

TEST_CASE("feasibility is monotone under container removal") {
    const ScaleConfig config{"prop", 15, 4};
    const auto scn = generate_scenario(config, 11);
    const auto p = testutil::random_feasible_placements(scn, 1, 3).front();
    REQUIRE(is_feasible(scn, p));
    for (int victim = 0; victim < scn.num_containers(); ++victim) {
        const auto [sub_scn, sub_p] = testutil::remove_container(scn, p, victim);
        CHECK(is_feasible(sub_scn, sub_p));
    }
}
