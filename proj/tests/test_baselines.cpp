#include <cmath>

#include <doctest.h>

#include "freshcon/baselines.hpp"
#include "test_util.hpp"

using namespace freshcon;
using namespace freshcon::baselines;

namespace {

contract::ProviderPreferences table_prefs() {
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    return prefs;
}

} // namespace

TEST_SUITE_BEGIN("baselines");

TEST_CASE("complete information binds every worker to zero surplus") {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const MechanismResult cc = solve_cc(ladder, table_prefs(), a1);
    for (int i = 0; i < 10; ++i) {
        CHECK(cc.worker_utilities[i] == 0.0);
        CHECK(std::fabs(contract::worker_utility(cc.menu.items[i], ladder.gamma[i])) <=
              1e-12);
    }
}

TEST_CASE("complete information dominates the asymmetric contract") {
    SplitMix64 rng(88);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ladder = test_util::random_ladder(rng, 8);
        contract::ProviderPreferences prefs;
        prefs.alpha = {rng.uniform01()};
        prefs.beta = 0.5 + 4.0 * rng.uniform01();
        const aoi::CycleCase cc = trial % 2 ? aoi::CycleCase::fixed_idle(1 + trial % 3, 2.0)
                                            : aoi::CycleCase::fixed_update(1 + trial % 3, 2.0);
        const MechanismResult full = solve_cc(ladder, prefs, cc);
        const solver::Solution ca = solver::solve_eut(ladder, prefs, cc);
        CHECK(full.provider_utility >=
              ca.report.objective_eut - 1e-9 * (1.0 + std::fabs(full.provider_utility)));
    }
}

TEST_CASE("welfare mechanism reuses the first-best frequencies but leaves rents") {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const auto prefs = table_prefs();
    const MechanismResult cc = solve_cc(ladder, prefs, a1);
    const MechanismResult cs = solve_cs(ladder, prefs, a1);
    for (int i = 0; i < 10; ++i) {
        CHECK(cs.menu.items[i].f == cc.menu.items[i].f);
        CHECK(cs.menu.items[i].R >= cc.menu.items[i].R - 1e-12);
        CHECK(cs.worker_utilities[i] >= -1e-9);
    }
    CHECK(cs.welfare == doctest::Approx(cc.welfare).epsilon(1e-12));
    CHECK(cs.provider_utility <= cc.provider_utility + 1e-9);
}

TEST_CASE("uniform-item leader pricing") {
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    SUBCASE("marginal type binds and the top segment joins") {
        contract::WorkerTypeLadder two;
        two.gamma = {1.0, 2.0};
        two.q = {0.5, 0.5};
        two.worker_count = 4;
        contract::ProviderPreferences prefs;
        prefs.alpha = {0.5};
        prefs.f_min = 0.05;
        const MechanismResult sg = solve_sg_uniform(two, prefs, a1);
        // Whatever threshold wins, participation is an upper segment and the
        // marginal participant has exactly zero surplus.
        int first = -1;
        for (int i = 0; i < 2; ++i)
            if (sg.participates[i]) {
                first = i;
                break;
            }
        REQUIRE(first >= 0);
        for (int i = first; i < 2; ++i)
            CHECK(sg.participates[i]);
        CHECK(std::fabs(contract::worker_utility(sg.menu.items[first], two.gamma[first])) <=
              1e-12);
        // If type 2 is the marginal type, type 1 must be priced out.
        if (first == 1)
            CHECK(contract::worker_utility(sg.menu.items[0], two.gamma[0]) < 0.0);
    }
    SUBCASE("single type matches complete information") {
        contract::WorkerTypeLadder one;
        one.gamma = {0.005};
        one.q = {1.0};
        one.worker_count = 10;
        const auto prefs = table_prefs();
        const MechanismResult sg = solve_sg_uniform(one, prefs, a1);
        const MechanismResult cc = solve_cc(one, prefs, a1);
        CHECK(sg.provider_utility == doctest::Approx(cc.provider_utility).epsilon(1e-6));
    }
    SUBCASE("table ladder yields an upper-segment participation set") {
        const auto ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
        const MechanismResult sg = solve_sg_uniform(ladder, table_prefs(), a1);
        bool seen = false;
        for (int i = 0; i < 10; ++i) {
            if (sg.participates[i])
                seen = true;
            else
                CHECK_FALSE(seen); // no gap below a participant
        }
        CHECK(sg.participates[9]);
        for (int i = 0; i < 10; ++i)
            if (sg.participates[i])
                CHECK(sg.worker_utilities[i] >= -1e-9);
    }
}

TEST_CASE("mechanism comparison at table settings") {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const auto results = compare_mechanisms(ladder, table_prefs(), a1);
    REQUIRE(results.size() == 4);
    CHECK(results[0].tag == Mechanism::CA);
    CHECK(results[1].tag == Mechanism::CC);
    CHECK(results[2].tag == Mechanism::CS);
    CHECK(results[3].tag == Mechanism::SG);

    // Hard: the information-rent-free relaxation dominates.
    CHECK(results[1].provider_utility >= results[0].provider_utility - 1e-9);
    // Hard: CC binds everyone to zero while CA leaves rents above type 1.
    for (int i = 0; i < 10; ++i) {
        CHECK(results[1].worker_utilities[i] == 0.0);
        CHECK(results[0].worker_utilities[i] >= -1e-9);
    }
    CHECK(results[0].worker_utilities[9] > 0.0);

    // Soft (reconstruction-dependent) orderings: report, do not fail.
    WARN_MESSAGE(results[0].provider_utility >= results[2].provider_utility - 1e-9,
                 "soft: CA >= CS provider ordering");
    WARN_MESSAGE(results[2].provider_utility >= results[3].provider_utility - 1e-9,
                 "soft: CS >= SG provider ordering");
    double ca_w = 0, cs_w = 0, sg_w = 0;
    for (int i = 0; i < 10; ++i) {
        ca_w += results[0].worker_utilities[i];
        cs_w += results[2].worker_utilities[i];
        sg_w += results[3].worker_utilities[i];
    }
    WARN_MESSAGE((cs_w >= ca_w && cs_w >= sg_w), "soft: workers best off under CS");
}

TEST_SUITE_END();
